use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Num(u64),
    /// A value literal, `#` included.
    Lit(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Slash,
    Amp,
    Bar,
    Tilde,
    Bang,
    Eq,
    Leq,
    Neq,
    NotLeq,
    Arrow,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Lit(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Slash => "/",
            Tok::Amp => "&",
            Tok::Bar => "|",
            Tok::Tilde => "~",
            Tok::Bang => "!",
            Tok::Eq => "=",
            Tok::Leq => "<=",
            Tok::Neq => "!=",
            Tok::NotLeq => "!<=",
            Tok::Arrow => "->",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Splits `text` into tokens; `//` starts a comment running to the end of
/// the line. Line and column are 1-based and count characters.
pub(crate) fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let at = |k: usize| chars.get(i + k).copied();
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && at(1) == Some('/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (tok, len) = if c.is_ascii_alphabetic() || c == '_' {
            let len = chars[i..]
                .iter()
                .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                .count();
            (Tok::Ident(chars[i..i + len].iter().collect()), len)
        } else if c.is_ascii_digit() {
            let len = chars[i..].iter().take_while(|c| c.is_ascii_digit()).count();
            let s: String = chars[i..i + len].iter().collect();
            let n = s.parse().map_err(|_| err(l0, c0, format!("number `{s}` too large")))?;
            (Tok::Num(n), len)
        } else if c == '#' {
            let len = literal_len(&chars[i..]).ok_or_else(|| err(l0, c0, "unterminated `#poly{`"))?;
            (Tok::Lit(chars[i..i + len].iter().collect()), len)
        } else {
            match (c, at(1), at(2)) {
                ('!', Some('<'), Some('=')) => (Tok::NotLeq, 3),
                ('!', Some('='), _) => (Tok::Neq, 2),
                ('<', Some('='), _) => (Tok::Leq, 2),
                ('-', Some('>'), _) => (Tok::Arrow, 2),
                ('!', ..) => (Tok::Bang, 1),
                ('(', ..) => (Tok::LParen, 1),
                (')', ..) => (Tok::RParen, 1),
                (',', ..) => (Tok::Comma, 1),
                ('.', ..) => (Tok::Dot, 1),
                ('/', ..) => (Tok::Slash, 1),
                ('&', ..) => (Tok::Amp, 1),
                ('|', ..) => (Tok::Bar, 1),
                ('~', ..) => (Tok::Tilde, 1),
                ('=', ..) => (Tok::Eq, 1),
                _ => return Err(err(l0, c0, format!("unexpected character `{c}`"))),
            }
        };
        // literals never span lines, so the column advances by `len`
        out.push(Spanned {
            tok,
            line: l0,
            col: c0,
        });
        i += len;
        col += len;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Length of the value literal at the start of `s`: `#poly{…}` up to the
/// closing brace, otherwise `#` followed by [A-Za-z0-9/].
pub(crate) fn literal_len(s: &[char]) -> Option<usize> {
    let head: String = s.iter().take(6).collect();
    if head == "#poly{" {
        let close = s.iter().position(|&c| c == '}' || c == '\n')?;
        return (s[close] == '}').then_some(close + 1);
    }
    Some(1 + s[1..].iter().take_while(|c| c.is_ascii_alphanumeric() || **c == '/').count())
}

/// Cursor over a token stream.
pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Cursor {
    pub(crate) fn new(text: &str) -> Result<Cursor> {
        Ok(Cursor {
            toks: lex(text)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> Error {
        let s = &self.toks[self.pos];
        err(s.line, s.col, msg)
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> Error {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    pub(crate) fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.next();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, t: &Tok, wanted: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    pub(crate) fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub(crate) fn ident(&mut self, wanted: &str) -> Result<String> {
        match self.peek() {
            Tok::Ident(s) if !super::KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.next();
                Ok(s)
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    pub(crate) fn num(&mut self, wanted: &str) -> Result<u64> {
        match self.peek() {
            Tok::Num(n) => {
                let n = *n;
                self.next();
                Ok(n)
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    pub(crate) fn end(&self) -> Result<()> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => Err(self.unexpected("end of input")),
        }
    }
}
