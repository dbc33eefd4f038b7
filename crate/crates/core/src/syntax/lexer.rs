use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    /// Numeric literal, kept as text so it can be parsed exactly.
    Num(String),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: usize,
}

/// Symbols, longest first. The second element is the canonical spelling.
const SYMBOLS: &[(&str, &str)] = &[
    ("_|_", "_|_"),
    ("|+>", "|+>"),
    ("|->", "|->"),
    ("(+)", "(+)"),
    ("|-", "|-"),
    ("->", "->"),
    ("=>", "=>"),
    ("(", "("),
    (")", ")"),
    (",", ","),
    (".", "."),
    (";", ";"),
    ("+", "+"),
    ("-", "-"),
    ("*", "*"),
    ("/", "/"),
    ("{", "{"),
    ("}", "}"),
    ("|", "|"),
    ("=", "="),
    (":", ":"),
    ("#", "#"),
    ("!", "!"),
    ("<", "<"),
    (">", ">"),
    ("@", "@"),
    ("\\", "lam"),
    ("·", "*"),
    ("×", "*"),
    ("λ", "lam"),
    ("♯", "#"),
    ("♭", "!"),
    ("⊕", "(+)"),
    ("⊗", "(x)"),
    ("⊸", "-o"),
    ("⊥", "_|_"),
    ("→", "->"),
    ("⇒", "=>"),
    ("⊢", "|-"),
    ("⟨", "<"),
    ("⟩", ">"),
    ("−", "-"),
    ("|+⟩", "|+>"),
    ("|−⟩", "|->"),
];

fn canonical_sym(s: &str) -> &'static str {
    for (_, c) in SYMBOLS {
        if *c == s {
            return c;
        }
    }
    match s {
        "(x)" => "(x)",
        _ => unreachable!("unknown symbol {s}"),
    }
}

/// Splits `src` into tokens. With `tensor` set, `(x)` written with
/// whitespace (or a line boundary) on both sides is the tensor operator.
pub fn lex(src: &str, tensor: bool) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    'outer: while i < src.len() {
        let rest = &src[i..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if rest.starts_with("--") {
            // line comment
            while i < src.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if tensor && rest.starts_with("(x)") {
            let before = i == 0 || src[..i].chars().last().unwrap().is_whitespace();
            let after = src[i + 3..].chars().next().is_none_or(|c| c.is_whitespace());
            if before && after {
                out.push(Token { tok: Tok::Sym(canonical_sym("(x)")), pos: i });
                i += 3;
                continue;
            }
        }
        // symbols are tried before identifiers because `_|_` starts with `_`
        let mut syms: Vec<&(&str, &str)> = SYMBOLS.iter().collect();
        syms.sort_by_key(|(s, _)| std::cmp::Reverse(s.len()));
        for (s, canon) in syms {
            if rest.starts_with(s) {
                let tok = if *canon == "lam" {
                    Tok::Ident("lam".into())
                } else if *canon == "|+>" || *canon == "|->" {
                    Tok::Ident((*canon).into())
                } else {
                    Tok::Sym(canonical_sym(canon))
                };
                out.push(Token { tok, pos: i });
                i += s.len();
                continue 'outer;
            }
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < src.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < src.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
                i += 1;
                while i < src.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < src.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < src.len() && (bytes[j] == b'-' || bytes[j] == b'+') {
                    j += 1;
                }
                if j < src.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < src.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            out.push(Token { tok: Tok::Num(src[start..i].to_string()), pos: start });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < src.len() {
                let d = src[i..].chars().next().unwrap();
                if d.is_alphanumeric() || d == '_' || d == '\'' {
                    i += d.len_utf8();
                } else {
                    break;
                }
            }
            out.push(Token { tok: Tok::Ident(src[start..i].to_string()), pos: start });
            continue;
        }
        return Err(Error::Parse { pos: i, msg: format!("unexpected character {c:?}") });
    }
    Ok(out)
}

/// Cursor over a token list with the usual helpers.
pub struct Cursor {
    toks: Vec<Token>,
    pub idx: usize,
    end: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Token>, src_len: usize) -> Cursor {
        Cursor { toks, idx: 0, end: src_len }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|t| &t.tok)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.idx + k).map(|t| &t.tok)
    }

    pub fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |t| t.pos)
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|t| t.tok.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.idx >= self.toks.len()
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(t)) if *t == s)
    }

    pub fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(t)) if t == s)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub fn eat_kw(&mut self, s: &str) -> bool {
        if self.is_kw(s) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`, found {}", self.describe()))
        }
    }

    pub fn expect_kw(&mut self, s: &str) -> Result<()> {
        if self.eat_kw(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`, found {}", self.describe()))
        }
    }

    pub fn expect_ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.idx += 1;
                Ok(s)
            }
            _ => self.err(format!("expected identifier, found {}", self.describe())),
        }
    }

    pub fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err(format!("unexpected {}", self.describe()))
        }
    }

    pub fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Num(s)) => format!("`{s}`"),
            Some(Tok::Sym(s)) => format!("`{s}`"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_needs_surrounding_space() {
        let t = lex("a (x) b", true).unwrap();
        assert_eq!(t[1].tok, Tok::Sym("(x)"));
        let t = lex("f (x)y", true).unwrap();
        assert_eq!(t[1].tok, Tok::Sym("("));
        let t = lex("a (x) b", false).unwrap();
        assert_eq!(t[1].tok, Tok::Sym("("));
    }

    #[test]
    fn unicode_aliases() {
        let t = lex("λx. ♯B ⊕ U", true).unwrap();
        assert_eq!(t[0].tok, Tok::Ident("lam".into()));
        assert_eq!(t[3].tok, Tok::Sym("#"));
        assert_eq!(t[5].tok, Tok::Sym("(+)"));
    }
}
