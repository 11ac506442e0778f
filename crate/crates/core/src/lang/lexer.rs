use super::{LangError, ParseError};
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    /// Integer, `a/b` written without spaces, or a decimal.
    Number(Rational),
    Newline,
    Semi,
    Comma,
    Colon,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Box,
    Arrow,
    Assign,
    In,
    SuchThat,
    Dist,
    Demon,
    DotDot,
    Plus,
    Minus,
    Star,
    Slash,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Not,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(r) => format!("number `{r}`"),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Box => "[]",
            Tok::Arrow => "->",
            Tok::Assign => ":=",
            Tok::In => ":in",
            Tok::SuchThat => ":suchthat",
            Tok::Dist => ":dist",
            Tok::Demon => "|^|",
            Tok::DotDot => "..",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Not => "!",
            _ => "?",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, LangError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let at = |i: usize| chars.get(i).copied();

    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok: Tok, len: usize, i: &mut usize, col: &mut usize| {
            out.push(Token { tok, line: start_line, col: start_col });
            *i += len;
            *col += len;
        };
        match c {
            '\n' => {
                out.push(Token { tok: Tok::Newline, line, col });
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if at(i + 1) == Some('/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            c if c.is_ascii_digit() || (c == '.' && at(i + 1).is_some_and(|d| d.is_ascii_digit())) => {
                let mut j = i;
                while at(j).is_some_and(|d| d.is_ascii_digit()) {
                    j += 1;
                }
                let mut is_int = true;
                if at(j) == Some('.') && at(j + 1).is_some_and(|d| d.is_ascii_digit()) {
                    is_int = false;
                    j += 1;
                    while at(j).is_some_and(|d| d.is_ascii_digit()) {
                        j += 1;
                    }
                }
                // `a/b` with no spaces is one rational literal
                if is_int && at(j) == Some('/') && at(j + 1).is_some_and(|d| d.is_ascii_digit()) {
                    let mut k = j + 1;
                    while at(k).is_some_and(|d| d.is_ascii_digit()) {
                        k += 1;
                    }
                    if !at(k).is_some_and(|d| d == '.' || d.is_alphanumeric() || d == '_') {
                        j = k;
                    }
                }
                let text: String = chars[i..j].iter().collect();
                let value = parse_rational(&text).map_err(|_| {
                    LangError::MalformedLiteral(ParseError { line, col, message: format!("malformed number literal `{text}`") })
                })?;
                if at(j).is_some_and(|d| d.is_alphabetic() || d == '_') {
                    return Err(LangError::MalformedLiteral(ParseError {
                        line,
                        col,
                        message: format!("malformed number literal `{text}{}`", chars[j]),
                    }));
                }
                push(Tok::Number(value), j - i, &mut i, &mut col);
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while at(j).is_some_and(|d| d.is_alphanumeric() || d == '_' || d == '\'') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                push(Tok::Ident(word), j - i, &mut i, &mut col);
            }
            ':' => {
                if at(i + 1) == Some('=') {
                    push(Tok::Assign, 2, &mut i, &mut col);
                } else {
                    let mut j = i + 1;
                    while at(j).is_some_and(|d| d.is_alphanumeric() || d == '_') {
                        j += 1;
                    }
                    let word: String = chars[i + 1..j].iter().collect();
                    match word.as_str() {
                        "in" => push(Tok::In, j - i, &mut i, &mut col),
                        "suchthat" => push(Tok::SuchThat, j - i, &mut i, &mut col),
                        "dist" => push(Tok::Dist, j - i, &mut i, &mut col),
                        _ => push(Tok::Colon, 1, &mut i, &mut col),
                    }
                }
            }
            '[' if at(i + 1) == Some(']') => push(Tok::Box, 2, &mut i, &mut col),
            '|' if at(i + 1) == Some('^') && at(i + 2) == Some('|') => push(Tok::Demon, 3, &mut i, &mut col),
            '-' if at(i + 1) == Some('>') => push(Tok::Arrow, 2, &mut i, &mut col),
            '.' if at(i + 1) == Some('.') => push(Tok::DotDot, 2, &mut i, &mut col),
            '<' if at(i + 1) == Some('=') => push(Tok::Le, 2, &mut i, &mut col),
            '>' if at(i + 1) == Some('=') => push(Tok::Ge, 2, &mut i, &mut col),
            '!' if at(i + 1) == Some('=') => push(Tok::Ne, 2, &mut i, &mut col),
            '&' if at(i + 1) == Some('&') => push(Tok::And, 2, &mut i, &mut col),
            '|' if at(i + 1) == Some('|') => push(Tok::Or, 2, &mut i, &mut col),
            _ => {
                let tok = match c {
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '+' => Tok::Plus,
                    '-' | '−' => Tok::Minus,
                    '*' | '×' => Tok::Star,
                    '/' => Tok::Slash,
                    '=' => Tok::Eq,
                    '≠' => Tok::Ne,
                    '<' => Tok::Lt,
                    '≤' => Tok::Le,
                    '>' => Tok::Gt,
                    '≥' => Tok::Ge,
                    '&' | '∧' => Tok::And,
                    '|' | '∨' => Tok::Or,
                    '!' | '¬' => Tok::Not,
                    other => {
                        return Err(LangError::Syntax(ParseError { line, col, message: format!("unexpected character `{other}`") }));
                    }
                };
                push(tok, 1, &mut i, &mut col);
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}
