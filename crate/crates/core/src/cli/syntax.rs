//! Textual word syntax.
//!
//! Lowercase `a..z` are generators 1..26 and uppercase letters their inverses.
//! Ranks above 26 use `x27` / `X27` tokens. Tokens may be separated by spaces;
//! `1` and the empty string denote the identity.

use thiserror::Error;

use crate::freegroup::{FreeGroupError, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("unrecognised token `{0}` in word")]
    BadToken(String),
    #[error(transparent)]
    Group(#[from] FreeGroupError),
}

pub fn parse_word(s: &str, rank: usize) -> Result<Word, SyntaxError> {
    let mut letters = Vec::new();
    for tok in s.split_whitespace() {
        if tok == "1" {
            continue;
        }
        if let Some(rest) = tok.strip_prefix('x').or_else(|| tok.strip_prefix('X')) {
            if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                let idx: i32 = rest.parse().map_err(|_| SyntaxError::BadToken(tok.into()))?;
                if idx == 0 {
                    return Err(SyntaxError::BadToken(tok.into()));
                }
                let sign = if tok.starts_with('X') { -1 } else { 1 };
                letters.push(Letter::new(sign * idx));
                continue;
            }
        }
        for c in tok.chars() {
            let l = match c {
                'a'..='z' => Letter::new((c as u8 - b'a' + 1) as i32),
                'A'..='Z' => Letter::new(-((c as u8 - b'A' + 1) as i32)),
                _ => return Err(SyntaxError::BadToken(tok.into())),
            };
            letters.push(l);
        }
    }
    Ok(Word::from_letters(rank, letters)?)
}

pub fn format_letter(l: Letter, rank: usize) -> String {
    if rank <= 26 {
        let base = if l.is_inverse() { b'A' } else { b'a' };
        ((base + (l.index() - 1) as u8) as char).to_string()
    } else if l.is_inverse() {
        format!("X{}", l.index())
    } else {
        format!("x{}", l.index())
    }
}

pub fn format_word(w: &Word) -> String {
    let parts: Vec<String> = w.letters().iter().map(|&l| format_letter(l, w.rank())).collect();
    if w.rank() <= 26 {
        parts.concat()
    } else {
        parts.join(" ")
    }
}
