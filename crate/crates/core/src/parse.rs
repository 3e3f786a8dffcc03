//! Text format for group inputs.
//!
//! ```text
//! # comment
//! generators: a b c
//! variables: x
//! relators: a^2, [a, b]^3
//! laws: [a, x, x, x]
//! max_class: 8
//! ```
//!
//! Words are products of terms separated by whitespace or `*`; a term is
//! a name, `1`, a parenthesized word or a left-normed bracket `[u, v, ...]`,
//! optionally raised to a signed integer power.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::WordError;
use crate::words::{Expr, GroupInput, Law, Relator, SymbolKind, SymbolTable};

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
    table: &'a SymbolTable,
}

impl<'a> Cursor<'a> {
    fn new(text: &str, line: usize, col0: usize, table: &'a SymbolTable) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            line,
            col0,
            table,
        }
    }

    fn col(&self) -> usize {
        self.col0 + self.pos + 1
    }

    fn err(&self, msg: impl Into<String>) -> WordError {
        WordError::Syntax {
            line: self.line,
            col: self.col(),
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<Expr, WordError> {
        let mut terms = Vec::new();
        loop {
            match self.peek() {
                Some('*') if !terms.is_empty() => {
                    self.pos += 1;
                    terms.push(self.term()?);
                }
                Some(c) if c.is_alphanumeric() || c == '_' || c == '(' || c == '[' => {
                    terms.push(self.term()?)
                }
                _ => break,
            }
        }
        match terms.len() {
            0 => Err(match self.peek() {
                Some(c) => self.err(format!("expected a word, found `{}`", c)),
                None => self.err("expected a word"),
            }),
            1 => Ok(terms.pop().unwrap()),
            _ => Ok(Expr::Product(terms)),
        }
    }

    fn term(&mut self) -> Result<Expr, WordError> {
        let atom = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(atom);
        }
        self.pos += 1;
        self.skip_ws();
        let (line, col) = (self.line, self.col());
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        let e: BigInt = text.parse().map_err(|_| WordError::Syntax {
            line,
            col,
            msg: "expected an integer exponent".into(),
        })?;
        if e.is_zero() {
            return Err(WordError::ZeroExponent { line, col });
        }
        Ok(Expr::Power(Box::new(atom), e))
    }

    fn atom(&mut self) -> Result<Expr, WordError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                Ok(w)
            }
            Some('[') => {
                self.pos += 1;
                let mut parts = vec![self.word()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    parts.push(self.word()?);
                }
                if parts.len() < 2 {
                    return Err(self.err("a bracket needs at least two entries"));
                }
                self.expect(']')?;
                Ok(Expr::Comm(parts))
            }
            Some('1') => {
                self.pos += 1;
                if self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_alphanumeric() || *c == '_')
                {
                    return Err(self.err("names cannot start with a digit"));
                }
                Ok(Expr::Identity)
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let col = self.col();
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_alphanumeric() || *c == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.table.lookup(&name) {
                    Some(s) => Ok(Expr::Sym(s)),
                    None => Err(WordError::UndeclaredSymbol {
                        name,
                        line: self.line,
                        col,
                    }),
                }
            }
            Some(c) => Err(self.err(format!("unexpected `{}`", c))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), WordError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c)))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Parses one word over the declared symbols.
pub fn parse_word(text: &str, table: &SymbolTable) -> Result<Expr, WordError> {
    let mut c = Cursor::new(text, 1, 0, table);
    let w = c.word()?;
    if !c.at_end() {
        return Err(c.err("trailing input"));
    }
    Ok(w)
}

/// Comma-separated word list; commas inside brackets belong to the brackets.
fn parse_word_list(
    text: &str,
    line: usize,
    col0: usize,
    table: &SymbolTable,
) -> Result<Vec<Expr>, WordError> {
    let mut c = Cursor::new(text, line, col0, table);
    let mut out = Vec::new();
    if c.at_end() {
        return Ok(out);
    }
    loop {
        out.push(c.word()?);
        match c.peek() {
            None => return Ok(out),
            Some(',') => c.pos += 1,
            Some(ch) => return Err(c.err(format!("unexpected `{}`", ch))),
        }
    }
}

/// Parses and validates a group input file.
pub fn parse_input(text: &str) -> Result<GroupInput, WordError> {
    let mut symbols = SymbolTable::new();
    let mut generators = Vec::new();
    let mut variables = Vec::new();
    let mut max_class = None;
    let mut word_lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(colon) = content.find(':') else {
            let col = content.len() - content.trim_start().len() + 1;
            return Err(WordError::Syntax {
                line,
                col,
                msg: "expected `keyword:`".into(),
            });
        };
        let key = content[..colon].trim();
        let body = &content[colon + 1..];
        let body_col = content[..colon + 1].chars().count();
        match key {
            "generators" | "variables" => {
                let kind = if key == "generators" {
                    SymbolKind::Generator
                } else {
                    SymbolKind::Variable
                };
                for name in body.split_whitespace() {
                    let ok = name
                        .chars()
                        .next()
                        .is_some_and(|c| c.is_alphabetic() || c == '_')
                        && name.chars().all(|c| c.is_alphanumeric() || c == '_');
                    if !ok {
                        let col = body_col + body.find(name).unwrap_or(0) + 1;
                        return Err(WordError::Syntax {
                            line,
                            col,
                            msg: format!("invalid name `{}`", name),
                        });
                    }
                    let id = symbols.declare(name, kind)?;
                    if kind == SymbolKind::Generator {
                        generators.push(id);
                    } else {
                        variables.push(id);
                    }
                }
            }
            "relators" | "laws" => {
                word_lines.push((key == "laws", line, body_col, body.to_string()))
            }
            "max_class" => {
                let v: usize = body.trim().parse().map_err(|_| WordError::Syntax {
                    line,
                    col: body_col + 1,
                    msg: "expected a nonnegative integer".into(),
                })?;
                max_class = Some(v);
            }
            other => {
                return Err(WordError::Syntax {
                    line,
                    col: 1,
                    msg: format!("unknown keyword `{}`", other),
                });
            }
        }
    }
    let mut relators = Vec::new();
    let mut laws = Vec::new();
    for (is_law, line, col0, body) in word_lines {
        for expr in parse_word_list(&body, line, col0, &symbols)? {
            if is_law {
                laws.push(Law::new(expr, &symbols)?);
            } else {
                relators.push(Relator::new(expr));
            }
        }
    }
    let input = GroupInput {
        symbols,
        generators,
        variables,
        relators,
        laws,
        max_class,
    };
    input.validate()?;
    Ok(input)
}

/// Renders an input back into the text format.
pub fn format_input(input: &GroupInput) -> String {
    let t = &input.symbols;
    let mut out = String::new();
    let names = |ids: &[usize]| {
        ids.iter()
            .map(|&s| t.name(s).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&format!("generators: {}\n", names(&input.generators)));
    if !input.variables.is_empty() {
        out.push_str(&format!("variables: {}\n", names(&input.variables)));
    }
    if !input.relators.is_empty() {
        let rs: Vec<String> = input
            .relators
            .iter()
            .map(|r| r.expr.display(t).to_string())
            .collect();
        out.push_str(&format!("relators: {}\n", rs.join(", ")));
    }
    if !input.laws.is_empty() {
        let ls: Vec<String> = input
            .laws
            .iter()
            .map(|l| l.expr.display(t).to_string())
            .collect();
        out.push_str(&format!("laws: {}\n", ls.join(", ")));
    }
    if let Some(c) = input.max_class {
        out.push_str(&format!("max_class: {}\n", c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{FreeGroup, Word};

    #[test]
    fn engel_input() {
        let inp = parse_input("generators: a b\nvariables: x\nlaws: [a,x,x,x,x]").unwrap();
        assert_eq!(inp.generators.len(), 2);
        assert_eq!(inp.laws.len(), 1);
        let law = &inp.laws[0];
        let a = inp.symbols.lookup("a").unwrap();
        let x = inp.symbols.lookup("x").unwrap();
        let expect = crate::words::engel_word(&Word::symbol(a), &Word::symbol(x), 4);
        assert_eq!(law.body, expect);
    }

    #[test]
    fn cyclic_input_and_errors() {
        let inp = parse_input("generators: a\nrelators: a^2").unwrap();
        assert_eq!(inp.relators.len(), 1);
        assert!(matches!(
            parse_input("generators: a\nlaws: [a,x]"),
            Err(WordError::UndeclaredSymbol {
                line: 2,
                col: 10,
                ..
            })
        ));
        assert!(matches!(
            parse_input("generators: a\nvariables: x\nrelators: x"),
            Err(WordError::VariableInRelator(_))
        ));
        assert!(matches!(
            parse_input("generators: a\nrelators: a^0"),
            Err(WordError::ZeroExponent { line: 2, .. })
        ));
        assert!(matches!(
            parse_input("generators: a\nrelators: [a]"),
            Err(WordError::Syntax { .. })
        ));
        assert!(matches!(
            parse_input("generators: a\nrelators: (a"),
            Err(WordError::Syntax { .. })
        ));
        assert!(matches!(
            parse_input("generators: a a"),
            Err(WordError::DuplicateSymbol(_))
        ));
        assert!(matches!(
            parse_input("gens: a"),
            Err(WordError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_input("generators: a\nlaws: a^2"),
            Err(WordError::NoVariable(_))
        ));
    }

    #[test]
    fn word_syntax() {
        let inp = parse_input("generators: a b c\nrelators: a*b^-2 c, [a b, c]^3, 1, (a b)^2 [a,b,c]\nmax_class: 4  # bound")
            .unwrap();
        assert_eq!(inp.relators.len(), 4);
        assert_eq!(inp.max_class, Some(4));
        let t = &inp.symbols;
        let w = |s: &str| parse_word(s, t).unwrap().to_word();
        assert_eq!(w("a*b^-2 c"), w("a b^-1 b^-1 c"));
        assert_eq!(w("[a,b]"), w("a^-1 b^-1 a b"));
        assert_eq!(w("[a,b,c]"), w("[[a,b],c]"));
        assert!(w("1").is_identity());
        assert_eq!(inp.relators[2].word, Word::identity());
        let e = parse_word("[a^-1, c, c]", t).unwrap();
        assert_eq!(
            e.eval(&FreeGroup, &mut |s| Ok(Word::symbol(s))).unwrap(),
            w("[[a^-1,c],c]")
        );
    }

    #[test]
    fn format_round_trip() {
        let text = "generators: a b\nvariables: x y\nrelators: a^3, [a, b]\nlaws: [a, x, x], [x, y]^2\nmax_class: 5\n";
        let inp = parse_input(text).unwrap();
        let again = parse_input(&format_input(&inp)).unwrap();
        assert_eq!(inp, again);
    }
}
