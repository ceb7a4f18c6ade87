//! Tokenizer and cursor shared by the concrete syntaxes of the bundled languages.

use std::fmt;

use thiserror::Error;

/// A parse failure with the 1-based source position it was detected at.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            line: pos.line,
            col: pos.col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Ident(String),
    /// Unsigned decimal literal, kept as text so each language picks its integer width.
    Num(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Num(s) => write!(f, "`{s}`"),
            Token::Sym(s) => write!(f, "`{s}`"),
            Token::Eof => write!(f, "end of input"),
        }
    }
}

// Longest symbols first so that `:=` wins over `:`.
const SYMBOLS: &[&str] = &[
    ":=", "::", "<=", ">=", "&&", "(", ")", "[", "]", "{", "}", ",", ";", "+", "-", "*", "/", "=",
    "<", ">", "\\", "λ", ".", "@", "|", "¬", "∧", "!", "⟨", "⟩", ":", "≤", "≥",
];

pub fn tokenize(src: &str) -> Result<Vec<(Token, Pos)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut pos = Pos { line: 1, col: 1 };
    let advance = |i: &mut usize, pos: &mut Pos, n: usize, chars: &[char]| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                pos.line += 1;
                pos.col = 1;
            } else {
                pos.col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut pos, 1, &chars);
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut pos, 1, &chars);
            }
            continue;
        }
        let start = pos;
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            out.push((Token::Num(chars[i..j].iter().collect()), start));
            let n = j - i;
            advance(&mut i, &mut pos, n, &chars);
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len()
                && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                && chars[j] != 'λ'
            {
                j += 1;
            }
            if j > i {
                out.push((Token::Ident(chars[i..j].iter().collect()), start));
                let n = j - i;
                advance(&mut i, &mut pos, n, &chars);
                continue;
            }
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(sym) => {
                out.push((Token::Sym(sym), start));
                advance(&mut i, &mut pos, sym.chars().count(), &chars);
            }
            None => return Err(ParseError::new(start, format!("unexpected character `{c}`"))),
        }
    }
    out.push((Token::Eof, pos));
    Ok(out)
}

/// Backtracking cursor over a token stream.
pub struct Cursor {
    tokens: Vec<(Token, Pos)>,
    at: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Cursor {
            tokens: tokenize(src)?,
            at: 0,
        })
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.at].0
    }

    pub fn peek_at(&self, offset: usize) -> &Token {
        let idx = (self.at + offset).min(self.tokens.len() - 1);
        &self.tokens[idx].0
    }

    pub fn pos(&self) -> Pos {
        self.tokens[self.at].1
    }

    pub fn bump(&mut self) -> Token {
        let tok = self.tokens[self.at].0.clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        tok
    }

    pub fn is_sym(&self, sym: &str) -> bool {
        matches!(self.peek(), Token::Sym(s) if *s == sym)
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Token::Ident(s) if s == kw)
    }

    pub fn eat_sym(&mut self, sym: &str) -> bool {
        if self.is_sym(sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, sym: &str) -> Result<(), ParseError> {
        if self.eat_sym(sym) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{sym}`, found {}", self.peek())))
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{kw}`, found {}", self.peek())))
        }
    }

    /// Consumes an identifier that is not one of `reserved`.
    pub fn ident(&mut self, reserved: &[&str]) -> Result<String, ParseError> {
        match self.peek().clone() {
            Token::Ident(name) if !reserved.contains(&name.as_str()) => {
                self.bump();
                Ok(name)
            }
            other => Err(self.error(format!("expected identifier, found {other}"))),
        }
    }

    /// Consumes an optionally negated decimal literal.
    pub fn signed_literal(&mut self) -> Option<String> {
        match (self.peek().clone(), self.peek_at(1).clone()) {
            (Token::Num(n), _) => {
                self.bump();
                Some(n)
            }
            (Token::Sym("-"), Token::Num(n)) => {
                self.bump();
                self.bump();
                Some(format!("-{n}"))
            }
            _ => None,
        }
    }

    pub fn at_end(&self) -> bool {
        matches!(self.peek(), Token::Eof)
    }

    pub fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {} after end of input", self.peek())))
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.pos(), message)
    }

    /// Runs `f`, rewinding the cursor if it fails.
    pub fn attempt<T>(
        &mut self,
        f: impl FnOnce(&mut Self) -> Result<T, ParseError>,
    ) -> Result<T, ParseError> {
        let saved = self.at;
        let res = f(self);
        if res.is_err() {
            self.at = saved;
        }
        res
    }
}

/// Splits `text` at the first top-level occurrence of `sep` (outside brackets).
pub fn split_top_level(text: &str, sep: char) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (idx, c) in text.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            _ if c == sep && depth == 0 => return Some((&text[..idx], &text[idx + c.len_utf8()..])),
            _ => {}
        }
    }
    None
}

/// Strips an optional `⟨ … ⟩` wrapper around a printed configuration.
pub fn strip_angles(text: &str) -> &str {
    let t = text.trim();
    t.strip_prefix('⟨')
        .and_then(|t| t.strip_suffix('⟩'))
        .unwrap_or(t)
        .trim()
}
