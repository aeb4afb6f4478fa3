use super::{DiagnosticKind, ParseDiagnostic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    OrganicAtom,
    BracketAtom,
    Bond,
    RingClosureDigit,
    BranchOpen,
    BranchClose,
    Dot,
}

/// One lexical unit of a SMILES string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmilesToken<'a> {
    pub kind: TokenKind,
    pub text: &'a str,
    /// Byte offset of `text` in the input.
    pub position: usize,
}

/// On-demand tokenizer, so the parser reports the first problem in source
/// order whether it is lexical or grammatical.
pub(crate) struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    pub(crate) fn new(src: &'a [u8]) -> Self {
        Lexer { src, pos: 0 }
    }

    fn token(&mut self, kind: TokenKind, len: usize) -> SmilesToken<'a> {
        let start = self.pos;
        self.pos += len;
        SmilesToken {
            kind,
            text: std::str::from_utf8(&self.src[start..self.pos]).expect("tokens are ASCII"),
            position: start,
        }
    }

    pub(crate) fn next_token(&mut self) -> Option<Result<SmilesToken<'a>, ParseDiagnostic>> {
        let bytes = self.src;
        let &c = bytes.get(self.pos)?;
        let next = bytes.get(self.pos + 1).copied();
        let tok = match c {
            b'C' if next == Some(b'l') => self.token(TokenKind::OrganicAtom, 2),
            b'B' if next == Some(b'r') => self.token(TokenKind::OrganicAtom, 2),
            b'B' | b'C' | b'N' | b'O' | b'P' | b'S' | b'F' | b'I' => {
                self.token(TokenKind::OrganicAtom, 1)
            }
            b'b' | b'c' | b'n' | b'o' | b'p' | b's' => self.token(TokenKind::OrganicAtom, 1),
            b'-' | b'=' | b'#' | b':' | b'/' | b'\\' => self.token(TokenKind::Bond, 1),
            b'(' => self.token(TokenKind::BranchOpen, 1),
            b')' => self.token(TokenKind::BranchClose, 1),
            b'.' => self.token(TokenKind::Dot, 1),
            b'0'..=b'9' => self.token(TokenKind::RingClosureDigit, 1),
            b'%' => {
                let digits = bytes[self.pos + 1..]
                    .iter()
                    .take(2)
                    .take_while(|b| b.is_ascii_digit())
                    .count();
                if digits != 2 {
                    let pos = self.pos;
                    self.pos = bytes.len();
                    return Some(Err(ParseDiagnostic::new(
                        DiagnosticKind::UnclosedRing,
                        pos,
                        "'%' must be followed by two digits",
                    )));
                }
                self.token(TokenKind::RingClosureDigit, 3)
            }
            b'[' => match bytes[self.pos..].iter().position(|&b| b == b']') {
                Some(end) if bytes[self.pos + 1..self.pos + end].is_ascii() => {
                    self.token(TokenKind::BracketAtom, end + 1)
                }
                Some(_) | None => {
                    let pos = self.pos;
                    let non_ascii = bytes[self.pos..].iter().position(|b| !b.is_ascii());
                    let close = bytes[self.pos..].iter().position(|&b| b == b']');
                    self.pos = bytes.len();
                    return Some(Err(match (non_ascii, close) {
                        (Some(bad), Some(end)) if bad < end => ParseDiagnostic::new(
                            DiagnosticKind::UnknownElement,
                            pos + bad,
                            "non-ASCII byte in SMILES",
                        ),
                        _ => ParseDiagnostic::new(
                            DiagnosticKind::BadBracketAtom,
                            pos,
                            "unterminated bracket atom",
                        ),
                    }));
                }
            },
            _ => {
                let pos = self.pos;
                self.pos = bytes.len();
                let message = if c.is_ascii() {
                    format!("unexpected character '{}'", c as char)
                } else {
                    "non-ASCII byte in SMILES".to_string()
                };
                return Some(Err(ParseDiagnostic::new(
                    DiagnosticKind::UnknownElement,
                    pos,
                    message,
                )));
            }
        };
        Some(Ok(tok))
    }
}

/// Split a SMILES string into tokens, stopping at the first lexical error.
pub fn tokenize(src: &str) -> Result<Vec<SmilesToken<'_>>, ParseDiagnostic> {
    let mut lexer = Lexer::new(src.as_bytes());
    let mut out = Vec::new();
    while let Some(tok) = lexer.next_token() {
        out.push(tok?);
    }
    Ok(out)
}
