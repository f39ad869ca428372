use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Word(String),
    LBrace,
    RBrace,
    Comma,
    Semi,
    Pipe,
    Eq,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Eq => "`=`".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '-' | '+')
}

/// Splits input into tokens; `#` starts a comment that runs to end of line.
pub(crate) fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, column);
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '|' => Some(Tok::Pipe),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            column += 1;
            out.push(Spanned {
                tok,
                line: tl,
                column: tc,
            });
        } else if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
        } else if c.is_whitespace() {
            chars.next();
            column += 1;
        } else if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                column += 1;
            }
        } else if is_word_char(c) {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if !is_word_char(c) {
                    break;
                }
                word.push(c);
                chars.next();
                column += 1;
            }
            out.push(Spanned {
                tok: Tok::Word(word),
                line: tl,
                column: tc,
            });
        } else {
            return Err(ParseError::new(tl, tc, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

/// Names of variables, states and networks: a letter, digit or `_`,
/// followed by letters, digits, `_`, `.` or `-`.
pub(crate) fn is_identifier(word: &str) -> bool {
    let mut it = word.chars();
    match it.next() {
        Some(c) if c.is_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    it.all(|c| c.is_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

/// Cursor over a token stream with positioned errors.
pub(crate) struct Cursor<'a> {
    toks: &'a [Spanned],
    pos: usize,
    /// Position reported for errors at end of input.
    eof: (usize, usize),
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(toks: &'a [Spanned], text: &str) -> Self {
        let lines = text.split('\n').count().max(1);
        let last = text.split('\n').next_back().unwrap_or("");
        let col = last.chars().count().max(1);
        Self {
            toks,
            pos: 0,
            eof: (lines, col),
        }
    }

    pub(crate) fn peek(&self) -> Option<&'a Spanned> {
        self.toks.get(self.pos)
    }

    pub(crate) fn next(&mut self) -> Option<&'a Spanned> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error_here(&self, message: impl Into<String>) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::new(t.line, t.column, message),
            None => ParseError::new(self.eof.0, self.eof.1, message),
        }
    }

    pub(crate) fn expect(&mut self, want: Tok, what: &str) -> Result<&'a Spanned, ParseError> {
        match self.peek() {
            Some(t) if t.tok == want => {
                self.pos += 1;
                Ok(t)
            }
            Some(t) => Err(ParseError::at(
                t,
                format!("expected {what}, found {}", t.tok.describe()),
            )),
            None => Err(self.error_here(format!("expected {what}, found end of input"))),
        }
    }

    pub(crate) fn word(&mut self, what: &str) -> Result<(&'a str, &'a Spanned), ParseError> {
        match self.peek() {
            Some(t) => match &t.tok {
                Tok::Word(w) => {
                    self.pos += 1;
                    Ok((w.as_str(), t))
                }
                other => Err(ParseError::at(
                    t,
                    format!("expected {what}, found {}", other.describe()),
                )),
            },
            None => Err(self.error_here(format!("expected {what}, found end of input"))),
        }
    }

    pub(crate) fn ident(&mut self, what: &str) -> Result<(&'a str, &'a Spanned), ParseError> {
        let (w, t) = self.word(what)?;
        if !is_identifier(w) {
            return Err(ParseError::at(t, format!("invalid {what} `{w}`")));
        }
        Ok((w, t))
    }

    pub(crate) fn eat(&mut self, want: &Tok) -> bool {
        if self.peek().is_some_and(|t| &t.tok == want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Spanned { tok: Tok::Word(w), .. }) if w == kw)
    }
}
