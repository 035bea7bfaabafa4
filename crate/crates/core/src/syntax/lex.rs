//! Character-level scanning shared by the Turtle, N-Triples and SPARQL
//! parsers.

use crate::error::ParseDiagnostic;
use crate::rdf::is_forbidden_iri_char;

pub(crate) type PResult<T> = Result<T, ParseDiagnostic>;

pub(crate) fn is_pn_chars_base(c: char) -> bool {
    c.is_alphabetic()
}

pub(crate) fn is_pn_chars_u(c: char) -> bool {
    is_pn_chars_base(c) || c == '_'
}

pub(crate) fn is_pn_chars(c: char) -> bool {
    is_pn_chars_u(c)
        || c == '-'
        || c.is_ascii_digit()
        || c == '\u{B7}'
        || ('\u{300}'..='\u{36F}').contains(&c)
        || ('\u{203F}'..='\u{2040}').contains(&c)
}

const LOCAL_ESCAPABLE: &str = "_~.-!$&'()*+,;=/?#@%";

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        // A leading byte-order mark is not content.
        let pos = if src.starts_with('\u{FEFF}') { '\u{FEFF}'.len_utf8() } else { 0 };
        Cursor { src, pos }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn reset(&mut self, pos: usize) {
        self.pos = pos;
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub fn peek_nth(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn starts_with(&self, s: &str) -> bool {
        self.rest().starts_with(s)
    }

    /// Case-insensitive keyword followed by a non-name character.
    pub fn at_keyword(&self, kw: &str) -> bool {
        let rest = self.rest();
        rest.len() >= kw.len()
            && rest.is_char_boundary(kw.len())
            && rest[..kw.len()].eq_ignore_ascii_case(kw)
            && !rest[kw.len()..]
                .chars()
                .next()
                .is_some_and(|c| is_pn_chars(c) || c == ':')
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    /// Skips whitespace and `#` comments.
    pub fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.pos += c.len_utf8();
                }
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
    }

    pub fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseDiagnostic {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map(|i| i + 1).unwrap_or(0);
        let column = before[line_start..].chars().count() + 1;
        ParseDiagnostic {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseDiagnostic {
        self.error_at(self.pos, message)
    }

    pub fn describe_next(&self) -> String {
        match self.peek() {
            Some(c) => format!("{c:?}"),
            None => "end of input".to_string(),
        }
    }

    pub fn expect(&mut self, c: char, context: &str) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}' {context}, found {}", self.describe_next())))
        }
    }

    /// `<...>` with `\u`/`\U` escapes; returns the raw (unresolved) IRI text.
    pub fn read_iriref(&mut self) -> PResult<String> {
        let start = self.pos;
        self.expect('<', "to open an IRI")?;
        let mut out = String::new();
        loop {
            let here = self.pos;
            match self.bump() {
                None => return Err(self.error_at(start, "unterminated IRI")),
                Some('>') => return Ok(out),
                Some('\\') => {
                    let c = self.read_uchar(here)?;
                    if is_forbidden_iri_char(c) {
                        return Err(self.error_at(here, format!("character {c:?} is not allowed in an IRI")));
                    }
                    out.push(c);
                }
                Some(c) if is_forbidden_iri_char(c) => {
                    return Err(self.error_at(here, format!("character {c:?} is not allowed in an IRI")));
                }
                Some(c) => out.push(c),
            }
        }
    }

    /// After a backslash: `uXXXX` or `UXXXXXXXX`.
    fn read_uchar(&mut self, escape_start: usize) -> PResult<char> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(self.error_at(escape_start, "invalid escape sequence")),
        };
        let mut value = 0u32;
        for _ in 0..width {
            let d = self
                .bump()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| self.error_at(escape_start, "invalid unicode escape"))?;
            value = value * 16 + d;
        }
        char::from_u32(value).ok_or_else(|| self.error_at(escape_start, "escape is not a unicode scalar value"))
    }

    /// A prefixed name `prefix:local` (either part may be empty).
    pub fn read_pname(&mut self) -> PResult<(String, String)> {
        let start = self.pos;
        let mut prefix = String::new();
        if self.peek().is_some_and(is_pn_chars_base) {
            let mut good_pos = self.pos;
            let mut good_len = 0;
            while let Some(c) = self.peek() {
                if is_pn_chars(c) || c == '.' {
                    self.bump();
                    prefix.push(c);
                    if c != '.' {
                        good_pos = self.pos;
                        good_len = prefix.len();
                    }
                } else {
                    break;
                }
            }
            prefix.truncate(good_len);
            self.pos = good_pos;
        }
        if !self.eat(':') {
            return Err(self.error_at(start, format!("expected a prefixed name, found {}", self.describe_next())));
        }
        let mut local = String::new();
        let first_ok = |c: char| is_pn_chars_u(c) || c == ':' || c.is_ascii_digit() || c == '%' || c == '\\';
        if self.peek().is_some_and(first_ok) {
            let mut good_pos = self.pos;
            let mut good_len = 0;
            let mut first = true;
            while let Some(c) = self.peek() {
                let here = self.pos;
                if c == '%' {
                    self.bump();
                    let h1 = self.bump().filter(char::is_ascii_hexdigit);
                    let h2 = self.bump().filter(char::is_ascii_hexdigit);
                    match (h1, h2) {
                        (Some(a), Some(b)) => {
                            local.push('%');
                            local.push(a);
                            local.push(b);
                        }
                        _ => return Err(self.error_at(here, "invalid percent escape in local name")),
                    }
                } else if c == '\\' {
                    self.bump();
                    match self.bump() {
                        Some(e) if LOCAL_ESCAPABLE.contains(e) => local.push(e),
                        _ => return Err(self.error_at(here, "invalid escape in local name")),
                    }
                } else if (first && first_ok(c)) || (!first && (is_pn_chars(c) || c == '.' || c == ':')) {
                    self.bump();
                    local.push(c);
                    if c == '.' {
                        first = false;
                        continue;
                    }
                } else {
                    break;
                }
                first = false;
                good_pos = self.pos;
                good_len = local.len();
            }
            local.truncate(good_len);
            self.pos = good_pos;
        }
        Ok((prefix, local))
    }

    /// After `_:`: a blank node label.
    pub fn read_blank_label(&mut self) -> PResult<String> {
        let start = self.pos;
        let mut label = String::new();
        match self.peek() {
            Some(c) if is_pn_chars_u(c) || c.is_ascii_digit() => {
                self.bump();
                label.push(c);
            }
            _ => return Err(self.error_at(start, "expected a blank node label")),
        }
        let mut good_pos = self.pos;
        let mut good_len = label.len();
        while let Some(c) = self.peek() {
            if is_pn_chars(c) || c == '.' {
                self.bump();
                label.push(c);
                if c != '.' {
                    good_pos = self.pos;
                    good_len = label.len();
                }
            } else {
                break;
            }
        }
        label.truncate(good_len);
        self.pos = good_pos;
        Ok(label)
    }

    /// A quoted string in any of the four quote styles.
    pub fn read_string(&mut self) -> PResult<String> {
        let start = self.pos;
        let quote = match self.peek() {
            Some(q @ ('"' | '\'')) => q,
            _ => return Err(self.error("expected a string")),
        };
        let triple: String = std::iter::repeat_n(quote, 3).collect();
        let long = self.starts_with(&triple);
        self.pos += if long { 3 } else { 1 };
        let mut out = String::new();
        loop {
            let here = self.pos;
            if long && self.starts_with(&triple) {
                self.pos += 3;
                return Ok(out);
            }
            match self.bump() {
                None => return Err(self.error_at(start, "unterminated string")),
                Some(c) if c == quote && !long => return Ok(out),
                Some('\\') => {
                    let c = match self.peek() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{C}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u' | 'U') => {
                            out.push(self.read_uchar(here)?);
                            continue;
                        }
                        _ => return Err(self.error_at(here, "invalid escape sequence in string")),
                    };
                    self.bump();
                    out.push(c);
                }
                Some(c @ ('\n' | '\r')) if !long => {
                    let _ = c;
                    return Err(self.error_at(here, "line break in single-quoted string"));
                }
                Some(c) => out.push(c),
            }
        }
    }

    /// After `@`: a language tag.
    pub fn read_lang_tag(&mut self) -> PResult<String> {
        let start = self.pos;
        let mut tag = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '-' {
                self.bump();
                tag.push(c);
            } else {
                break;
            }
        }
        if crate::rdf::is_valid_lang_tag(&tag) {
            Ok(tag)
        } else {
            Err(self.error_at(start, format!("invalid language tag {tag:?}")))
        }
    }

    /// A numeric literal; returns its lexical form and datatype IRI.
    pub fn read_number(&mut self) -> PResult<(String, &'static str)> {
        use crate::rdf::ns::xsd;
        let start = self.pos;
        let mut lexical = String::new();
        if let Some(sign @ ('+' | '-')) = self.peek() {
            self.bump();
            lexical.push(sign);
        }
        let mut int_digits = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            self.bump();
            lexical.push(c);
            int_digits += 1;
        }
        let mut datatype = xsd::INTEGER;
        if self.peek() == Some('.') && self.peek_nth(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            lexical.push('.');
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                self.bump();
                lexical.push(c);
            }
            datatype = xsd::DECIMAL;
        } else if int_digits == 0 {
            return Err(self.error_at(start, "expected a number"));
        }
        if let Some(e @ ('e' | 'E')) = self.peek() {
            let save = self.pos;
            self.bump();
            let mut exp = String::from(e);
            if let Some(sign @ ('+' | '-')) = self.peek() {
                self.bump();
                exp.push(sign);
            }
            let mut exp_digits = 0;
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                self.bump();
                exp.push(c);
                exp_digits += 1;
            }
            if exp_digits == 0 {
                self.pos = save;
                return Err(self.error_at(save, "malformed exponent"));
            }
            lexical.push_str(&exp);
            datatype = xsd::DOUBLE;
        }
        Ok((lexical, datatype))
    }
}

/// Resolves a relative IRI reference against a base IRI.
pub(crate) fn resolve_iri(base: &str, reference: &str) -> String {
    if has_scheme(reference) {
        return reference.to_string();
    }
    let (scheme, after_scheme) = base.split_once(':').unwrap_or(("", base));
    let without_fragment = |s: &str| s.split('#').next().unwrap_or("").to_string();
    let base_no_frag = without_fragment(base);
    if let Some(rest) = reference.strip_prefix("//") {
        return format!("{scheme}://{rest}");
    }
    if reference.is_empty() {
        return base_no_frag;
    }
    if reference.starts_with('#') {
        return format!("{base_no_frag}{reference}");
    }
    let base_no_query = base_no_frag.split('?').next().unwrap_or("").to_string();
    if reference.starts_with('?') {
        return format!("{base_no_query}{reference}");
    }
    let (authority, base_path) = match after_scheme.strip_prefix("//") {
        Some(rest) => {
            let rest = rest.split(['?', '#']).next().unwrap_or("");
            match rest.find('/') {
                Some(i) => (format!("//{}", &rest[..i]), rest[i..].to_string()),
                None => (format!("//{rest}"), String::new()),
            }
        }
        None => (String::new(), after_scheme.split(['?', '#']).next().unwrap_or("").to_string()),
    };
    let (ref_path, ref_tail) = match reference.find(['?', '#']) {
        Some(i) => (&reference[..i], &reference[i..]),
        None => (reference, ""),
    };
    let merged = if ref_path.starts_with('/') {
        ref_path.to_string()
    } else if !authority.is_empty() && base_path.is_empty() {
        format!("/{ref_path}")
    } else {
        let dir = base_path.rfind('/').map(|i| &base_path[..=i]).unwrap_or("");
        format!("{dir}{ref_path}")
    };
    format!("{scheme}:{authority}{}{ref_tail}", remove_dot_segments(&merged))
}

fn has_scheme(s: &str) -> bool {
    match s.find(':') {
        Some(i) if i > 0 => {
            let scheme = &s[..i];
            scheme.starts_with(|c: char| c.is_ascii_alphabetic())
                && scheme.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        }
        _ => false,
    }
}

fn remove_dot_segments(path: &str) -> String {
    let mut out: Vec<&str> = Vec::new();
    let segments: Vec<&str> = path.split('/').collect();
    let last = segments.len().saturating_sub(1);
    for (i, seg) in segments.iter().enumerate() {
        match *seg {
            "." => {
                if i == last {
                    out.push("");
                }
            }
            ".." => {
                if out.len() > 1 {
                    out.pop();
                }
                if i == last {
                    out.push("");
                }
            }
            s => out.push(s),
        }
    }
    out.join("/")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pname_trailing_dot_is_not_part_of_local() {
        let mut c = Cursor::new("amv:Mathematics. rest");
        assert_eq!(c.read_pname().unwrap(), ("amv".into(), "Mathematics".into()));
        assert_eq!(c.peek(), Some('.'));
    }

    #[test]
    fn pname_with_hyphens_and_escapes() {
        let mut c = Cursor::new("amv:Knuth-Morris-PrattAlgorithm ");
        assert_eq!(c.read_pname().unwrap().1, "Knuth-Morris-PrattAlgorithm");
        let mut c = Cursor::new(r"ex:a\.b.");
        assert_eq!(c.read_pname().unwrap().1, "a.b");
    }

    #[test]
    fn numbers() {
        assert_eq!(Cursor::new("7)").read_number().unwrap().0, "7");
        assert_eq!(Cursor::new("7.").read_number().unwrap().0, "7");
        let (lex, dt) = Cursor::new("-1.5e3").read_number().unwrap();
        assert_eq!((lex.as_str(), dt), ("-1.5e3", crate::rdf::ns::xsd::DOUBLE));
    }

    #[test]
    fn strings_and_escapes() {
        assert_eq!(Cursor::new(r#""a\"bé""#).read_string().unwrap(), "a\"bé");
        assert_eq!(Cursor::new("'''x\n'y'''").read_string().unwrap(), "x\n'y");
        assert!(Cursor::new("\"abc").read_string().is_err());
    }

    #[test]
    fn error_positions_are_one_based() {
        let c = Cursor::new("ab\ncd");
        let d = c.error_at(4, "x");
        assert_eq!((d.line, d.column), (2, 2));
    }

    #[test]
    fn relative_resolution() {
        let base = "http://example.org/a/b#frag";
        assert_eq!(resolve_iri(base, "c"), "http://example.org/a/c");
        assert_eq!(resolve_iri(base, "../c"), "http://example.org/c");
        assert_eq!(resolve_iri(base, "#x"), "http://example.org/a/b#x");
        assert_eq!(resolve_iri(base, "/z"), "http://example.org/z");
        assert_eq!(resolve_iri(base, "//other.org/p"), "http://other.org/p");
        assert_eq!(resolve_iri(base, "https://x.org/"), "https://x.org/");
        assert_eq!(resolve_iri("http://example.org", "c"), "http://example.org/c");
    }
}
