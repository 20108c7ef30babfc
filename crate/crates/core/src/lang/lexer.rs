use crate::error::{Error, Result};
use crate::model::is_word_char;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Identifiers, value tokens and the keywords `true`/`false`.
    Word(String),
    LBracket,
    RBracket,
    Lt,
    Gt,
    LParen,
    RParen,
    Semi,
    Comma,
    Assign,
    Eq,
    Neq,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    End,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::End => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Assign => "<-",
            Tok::Eq => "=",
            Tok::Neq => "!=",
            Tok::Bang => "!",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            Tok::DArrow => "<->",
            Tok::Word(_) | Tok::End => "",
        }
    }
}

/// Tokens paired with their byte offsets; always ends with [`Tok::End`].
pub(crate) fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = text[i..].chars().next().expect("in bounds");
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let rest = &text[i..];
        let fixed = [
            ("<->", Tok::DArrow),
            ("<-", Tok::Assign),
            ("->", Tok::Arrow),
            ("!=", Tok::Neq),
            ("[", Tok::LBracket),
            ("]", Tok::RBracket),
            ("<", Tok::Lt),
            (">", Tok::Gt),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            (";", Tok::Semi),
            (",", Tok::Comma),
            ("=", Tok::Eq),
            ("!", Tok::Bang),
            ("&", Tok::Amp),
            ("|", Tok::Pipe),
        ];
        if let Some((s, tok)) = fixed.iter().find(|(s, _)| rest.starts_with(s)) {
            out.push((i, tok.clone()));
            i += s.len();
            continue;
        }
        let start = i;
        if c == '-' {
            i += 1;
        }
        let body_start = i;
        while i < bytes.len() {
            let ch = text[i..].chars().next().expect("in bounds");
            if !is_word_char(ch) {
                break;
            }
            i += ch.len_utf8();
        }
        if i == body_start {
            return Err(Error::Syntax {
                offset: start,
                expected: "a formula".into(),
                found: format!("`{c}`"),
            });
        }
        out.push((start, Tok::Word(text[start..i].to_string())));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}
