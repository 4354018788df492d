use super::{DslError, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Number(u64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Equals,
    Arrow,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(n) => format!("`{n}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

/// Splits `text` into tokens. `#` starts a comment running to end of line.
/// The final token is always `Eof`, spanning the empty range at the end.
pub fn tokenize(text: &str) -> Result<Vec<Token>, DslError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let (sl, sc) = (line, col);
        let span = |end: usize| SourceSpan { line: sl, column: sc, start, end };
        match c {
            b'\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            b' ' | b'\t' | b'\r' => {
                i += 1;
                col += 1;
                continue;
            }
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            _ => {}
        }
        let simple = match c {
            b'{' => Some(Tok::LBrace),
            b'}' => Some(Tok::RBrace),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'[' => Some(Tok::LBracket),
            b']' => Some(Tok::RBracket),
            b',' => Some(Tok::Comma),
            b';' => Some(Tok::Semi),
            b':' => Some(Tok::Colon),
            b'=' => Some(Tok::Equals),
            _ => None,
        };
        if let Some(tok) = simple {
            i += 1;
            col += 1;
            out.push(Token { tok, span: span(i) });
            continue;
        }
        if c == b'-' {
            if bytes.get(i + 1) == Some(&b'>') {
                i += 2;
                col += 2;
                out.push(Token { tok: Tok::Arrow, span: span(i) });
                continue;
            }
            return Err(DslError::Syntax { message: "expected `->`".into(), span: span(i + 1) });
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            let n = text[start..i].parse::<u64>().map_err(|_| DslError::Syntax { message: "number out of range".into(), span: span(i) })?;
            out.push(Token { tok: Tok::Number(n), span: span(i) });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(text[start..i].to_string()), span: span(i) });
            continue;
        }
        // Step over a whole UTF-8 character so the span stays on a boundary.
        let len = text[i..].chars().next().map(char::len_utf8).unwrap_or(1);
        return Err(DslError::Syntax { message: format!("unexpected character `{}`", &text[i..i + len]), span: span(i + len) });
    }
    out.push(Token { tok: Tok::Eof, span: SourceSpan { line, column: col, start: i, end: i } });
    Ok(out)
}

/// Cursor over a token stream shared by the theory and brain parsers.
pub struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Self, DslError> {
        Ok(Cursor { toks: tokenize(text)?, pos: 0 })
    }

    pub fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    pub fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    pub fn error(&self, message: impl Into<String>) -> DslError {
        DslError::Syntax { message: message.into(), span: self.peek().span }
    }

    pub fn expect(&mut self, want: Tok) -> Result<SourceSpan, DslError> {
        if self.peek().tok == want {
            Ok(self.next().span)
        } else {
            Err(self.error(format!("expected {}, found {}", want.describe(), self.peek().tok.describe())))
        }
    }

    pub fn eat(&mut self, want: &Tok) -> bool {
        if &self.peek().tok == want {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn ident(&mut self) -> Result<(String, SourceSpan), DslError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.next().span))
            }
            other => Err(self.error(format!("expected identifier, found {}", other.describe()))),
        }
    }

    pub fn keyword(&mut self, kw: &str) -> Result<SourceSpan, DslError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == kw => Ok(self.next().span),
            other => Err(self.error(format!("expected `{kw}`, found {}", other.describe()))),
        }
    }

    pub fn number(&mut self) -> Result<(u64, SourceSpan), DslError> {
        match self.peek().tok {
            Tok::Number(n) => Ok((n, self.next().span)),
            ref other => Err(self.error(format!("expected number, found {}", other.describe()))),
        }
    }
}
