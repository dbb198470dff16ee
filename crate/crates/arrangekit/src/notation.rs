//! Text notation for arrangements.
//!
//! Grammar (LL(1) on the token stream):
//!
//! ```text
//! arrangement := group+
//! group       := '(' body ')' [ '_' multiplicity ]
//! body        := item ( ',' item )*
//! item        := species-token [ '_' positive-integer ]
//! multiplicity:= positive-integer | 'inf'
//! species-token := letter (letter | digit)* [charge]
//! charge      := ('^' digits)? ('+' | '-')        // digits may be empty
//! ```
//!
//! Whitespace between tokens is ignored. `_inf` denotes the thermodynamic
//! limit and is display-only: [`parse`] and [`parse_lenient`] reject it with
//! a dedicated error, while [`parse_display`] returns a symbolic form that is
//! never an [`Arrangement`].

use std::fmt;

use thiserror::Error;

use crate::model::{
    scan_species_token, Arrangement, Cluster, Composition, ModelError, SpeciesName, SpeciesTable,
};

/// A grammar violation at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "expected {} at byte {}, found {}",
            self.expected, self.offset, self.found
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotationError {
    #[error("parse error: {0}")]
    Syntax(ParseError),
    #[error("unknown species `{name}` at byte {offset}")]
    UnknownSpecies { name: String, offset: usize },
    #[error("`_inf` at byte {offset} denotes the thermodynamic limit and cannot be enumerated")]
    InfinityNotEnumerable { offset: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn syntax(offset: usize, expected: &str, found: impl Into<String>) -> NotationError {
    NotationError::Syntax(ParseError {
        offset,
        expected: expected.to_owned(),
        found: found.into(),
    })
}

/// Group repetition count in a display form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupCount {
    Finite(u64),
    Infinite,
}

/// One parenthesized group as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplayGroup {
    pub cluster: Cluster,
    pub count: GroupCount,
}

/// A faithfully parsed arrangement string that may contain `_inf` groups.
///
/// Group order is kept as written; this is a display value, not a canonical
/// [`Arrangement`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplayArrangement {
    pub groups: Vec<DisplayGroup>,
}

impl fmt::Display for DisplayArrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for group in &self.groups {
            write_group(f, &group.cluster)?;
            match group.count {
                GroupCount::Finite(m) if m >= 2 => write!(f, "_{m}")?,
                GroupCount::Finite(_) => {}
                GroupCount::Infinite => write!(f, "_inf")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    LParen,
    RParen,
    Comma,
    Underscore,
    Number(u64),
    Word(String),
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::LParen => "`(`".to_owned(),
            Token::RParen => "`)`".to_owned(),
            Token::Comma => "`,`".to_owned(),
            Token::Underscore => "`_`".to_owned(),
            Token::Number(n) => format!("number `{n}`"),
            Token::Word(w) => format!("`{w}`"),
            Token::End => "end of input".to_owned(),
        }
    }
}

struct Lexer<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(input: &'a str) -> Self {
        Lexer { input, pos: 0 }
    }

    fn skip_whitespace(&mut self) {
        let bytes = self.input.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Returns the next token and its starting byte offset.
    fn next_token(&mut self) -> Result<(Token, usize), NotationError> {
        self.skip_whitespace();
        let start = self.pos;
        let bytes = self.input.as_bytes();
        if start >= bytes.len() {
            return Ok((Token::End, start));
        }
        let token = match bytes[start] {
            b'(' => {
                self.pos += 1;
                Token::LParen
            }
            b')' => {
                self.pos += 1;
                Token::RParen
            }
            b',' => {
                self.pos += 1;
                Token::Comma
            }
            b'_' => {
                self.pos += 1;
                Token::Underscore
            }
            c if c.is_ascii_digit() => {
                let mut end = start;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                let text = &self.input[start..end];
                let value: u64 = text.parse().map_err(|_| {
                    syntax(start, "a smaller number", format!("`{text}`"))
                })?;
                self.pos = end;
                Token::Number(value)
            }
            c if c.is_ascii_alphabetic() => {
                let end = scan_species_token(self.input, start).expect("letter start");
                self.pos = end;
                Token::Word(self.input[start..end].to_owned())
            }
            _ => {
                let ch = self.input[start..].chars().next().unwrap();
                return Err(syntax(start, "`(`", format!("`{ch}`")));
            }
        };
        Ok((token, start))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: Token,
    offset: usize,
    species: Option<&'a SpeciesTable>,
    allow_inf: bool,
}

impl<'a> Parser<'a> {
    fn new(
        input: &'a str,
        species: Option<&'a SpeciesTable>,
        allow_inf: bool,
    ) -> Result<Self, NotationError> {
        let mut lexer = Lexer::new(input);
        let (current, offset) = lexer.next_token()?;
        Ok(Parser {
            lexer,
            current,
            offset,
            species,
            allow_inf,
        })
    }

    fn advance(&mut self) -> Result<(), NotationError> {
        let (token, offset) = self.lexer.next_token()?;
        self.current = token;
        self.offset = offset;
        Ok(())
    }

    fn fail(&self, expected: &str) -> NotationError {
        syntax(self.offset, expected, self.current.describe())
    }

    fn parse_arrangement(&mut self) -> Result<(DisplayArrangement, Vec<usize>), NotationError> {
        let mut groups = Vec::new();
        let mut count_offsets = Vec::new();
        if !matches!(self.current, Token::LParen) {
            return Err(self.fail("`(`"));
        }
        while matches!(self.current, Token::LParen) {
            let (group, count_offset) = self.parse_group()?;
            groups.push(group);
            count_offsets.push(count_offset);
        }
        if !matches!(self.current, Token::End) {
            return Err(self.fail("`(` or end of input"));
        }
        Ok((DisplayArrangement { groups }, count_offsets))
    }

    /// Parses one group; returns it with the byte offset of its multiplicity
    /// suffix (the offset of the group when there is none).
    fn parse_group(&mut self) -> Result<(DisplayGroup, usize), NotationError> {
        let group_offset = self.offset;
        self.advance()?; // consume '('
        let mut members: Vec<(SpeciesName, u64)> = Vec::new();
        loop {
            let (name, count) = self.parse_item()?;
            members.push((name, count));
            match self.current {
                Token::Comma => self.advance()?,
                Token::RParen => break,
                _ => return Err(self.fail("`,` or `)`")),
            }
        }
        self.advance()?; // consume ')'

        let mut count = GroupCount::Finite(1);
        let mut count_offset = group_offset;
        if matches!(self.current, Token::Underscore) {
            self.advance()?;
            count_offset = self.offset;
            count = match &self.current {
                Token::Number(0) => return Err(self.fail("a positive integer")),
                Token::Number(n) => GroupCount::Finite(*n),
                Token::Word(w) if w == "inf" => {
                    if !self.allow_inf {
                        return Err(NotationError::InfinityNotEnumerable {
                            offset: count_offset,
                        });
                    }
                    GroupCount::Infinite
                }
                _ => return Err(self.fail("a positive integer or `inf`")),
            };
            self.advance()?;
        }

        let composition = Composition::new(members)?;
        Ok((
            DisplayGroup {
                cluster: Cluster::new(composition),
                count,
            },
            count_offset,
        ))
    }

    fn parse_item(&mut self) -> Result<(SpeciesName, u64), NotationError> {
        let word_offset = self.offset;
        let word = match &self.current {
            Token::Word(w) => w.clone(),
            _ => return Err(self.fail("a species token")),
        };
        if let Some(table) = self.species {
            let name = SpeciesName::new(word.clone())?;
            if !table.contains(&name) {
                return Err(NotationError::UnknownSpecies {
                    name: word,
                    offset: word_offset,
                });
            }
        }
        self.advance()?;

        let mut count = 1;
        if matches!(self.current, Token::Underscore) {
            self.advance()?;
            count = match self.current {
                Token::Number(0) => return Err(self.fail("a positive integer")),
                Token::Number(n) => n,
                _ => return Err(self.fail("a positive integer")),
            };
            self.advance()?;
        }
        Ok((SpeciesName::new(word)?, count))
    }
}

fn to_arrangement(
    display: DisplayArrangement,
    count_offsets: &[usize],
) -> Result<Arrangement, NotationError> {
    let mut groups = Vec::with_capacity(display.groups.len());
    for (group, &offset) in display.groups.into_iter().zip(count_offsets) {
        match group.count {
            GroupCount::Finite(m) => groups.push((group.cluster, m)),
            GroupCount::Infinite => {
                return Err(NotationError::InfinityNotEnumerable { offset })
            }
        }
    }
    Ok(Arrangement::from_groups(groups)?)
}

/// Parses `text` against a declared species table; tokens not in the table
/// are rejected. Returns the canonical arrangement.
pub fn parse(text: &str, species: &SpeciesTable) -> Result<Arrangement, NotationError> {
    let mut parser = Parser::new(text, Some(species), false)?;
    let (display, offsets) = parser.parse_arrangement()?;
    to_arrangement(display, &offsets)
}

/// Parses `text` accepting any well-formed species token; the composition is
/// derived entirely from the text.
pub fn parse_lenient(text: &str) -> Result<Arrangement, NotationError> {
    let mut parser = Parser::new(text, None, false)?;
    let (display, offsets) = parser.parse_arrangement()?;
    to_arrangement(display, &offsets)
}

/// Display-mode parse: accepts `_inf` group multiplicities and returns the
/// groups as written. The result is symbolic and never an [`Arrangement`].
pub fn parse_display(text: &str) -> Result<DisplayArrangement, NotationError> {
    let mut parser = Parser::new(text, None, true)?;
    let (display, _) = parser.parse_arrangement()?;
    Ok(display)
}

fn write_group(f: &mut impl fmt::Write, cluster: &Cluster) -> fmt::Result {
    f.write_char('(')?;
    let mut first = true;
    for (name, count) in cluster.members().counts() {
        if !first {
            f.write_char(',')?;
        }
        first = false;
        f.write_str(name.as_str())?;
        if count >= 2 {
            write!(f, "_{count}")?;
        }
    }
    f.write_char(')')
}

/// Prints the canonical text form: groups in canonical order, in-group
/// species contracted with `_k` (k >= 2), repeated groups contracted with a
/// trailing `_m` (m >= 2). `parse(print(a))` recovers `a` exactly.
pub fn print(arr: &Arrangement) -> String {
    let mut out = String::new();
    for group in arr.groups() {
        write_group(&mut out, &group.cluster).expect("string write");
        if group.multiplicity >= 2 {
            out.push('_');
            out.push_str(&group.multiplicity.to_string());
        }
    }
    out
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Species;

    fn table(names: &[&str]) -> SpeciesTable {
        SpeciesTable::new(
            names
                .iter()
                .map(|n| Species::identical(*n).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn parses_paper_three_body_strings() {
        let t = table(&["A", "B", "C"]);
        let arr = parse("(A)(B,C)", &t).unwrap();
        assert_eq!(print(&arr), "(B,C)(A)");
        assert_eq!(arr.cluster_count(), 2);
        assert_eq!(arr.composition().total_size(), 3);
    }

    #[test]
    fn contraction_expansion() {
        let arr = parse_lenient("(A_2)_2").unwrap();
        assert_eq!(arr.groups().len(), 1);
        assert_eq!(arr.groups()[0].multiplicity, 2);
        assert_eq!(arr.groups()[0].cluster.size(), 2);
        assert_eq!(arr.composition().total_size(), 4);
    }

    #[test]
    fn rubidium_example() {
        let arr = parse_lenient("(Rb_2)(Rb)_3").unwrap();
        assert_eq!(arr.composition().total_size(), 5);
        assert_eq!(print(&arr), "(Rb_2)(Rb)_3");
    }

    #[test]
    fn malformed_input_reports_offset() {
        let err = parse_lenient("(A").unwrap_err();
        match err {
            NotationError::Syntax(e) => {
                assert_eq!(e.offset, 2);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unknown_species_is_rejected() {
        let t = table(&["A"]);
        let err = parse("(A)(Q)", &t).unwrap_err();
        match err {
            NotationError::UnknownSpecies { name, offset } => {
                assert_eq!(name, "Q");
                assert_eq!(offset, 4);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn inf_is_display_only() {
        let err = parse_lenient("(Rb_2)(Rb)_inf").unwrap_err();
        assert!(matches!(err, NotationError::InfinityNotEnumerable { offset: 11 }));

        let display = parse_display("(Rb_2)(Rb)_inf").unwrap();
        assert_eq!(display.groups.len(), 2);
        assert_eq!(display.groups[1].count, GroupCount::Infinite);
        assert_eq!(display.to_string(), "(Rb_2)(Rb)_inf");
    }

    #[test]
    fn in_group_inf_is_a_plain_syntax_error() {
        let err = parse_display("(A_inf)").unwrap_err();
        assert!(matches!(err, NotationError::Syntax(_)));
    }

    #[test]
    fn print_canonical_examples() {
        let three_free = parse_lenient("(A)(A)(A)").unwrap();
        assert_eq!(print(&three_free), "(A)_3");

        let trimer = parse_lenient("(A,A,A)").unwrap();
        assert_eq!(print(&trimer), "(A_3)");

        let mixed = parse_lenient("(A)(A,A)").unwrap();
        assert_eq!(print(&mixed), "(A_2)(A)");
    }

    #[test]
    fn whitespace_and_item_order_are_ignored() {
        let a = parse_lenient("(B,A)").unwrap();
        let b = parse_lenient("( A , B )").unwrap();
        assert_eq!(a, b);
        let c = parse_lenient(" (A) (B,C) ").unwrap();
        let d = parse_lenient("(A)(C,B)").unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn charge_suffixes_are_names() {
        let arr = parse_lenient("(A^+)(e^-)").unwrap();
        assert_eq!(print(&arr), "(A^+)(e^-)");
        let arr = parse_lenient("(A^2+)(e-)_2").unwrap();
        assert_eq!(print(&arr), "(A^2+)(e-)_2");
    }

    #[test]
    fn zero_multiplicities_are_rejected() {
        assert!(matches!(
            parse_lenient("(A_0)"),
            Err(NotationError::Syntax(_))
        ));
        assert!(matches!(
            parse_lenient("(A)_0"),
            Err(NotationError::Syntax(_))
        ));
    }

    #[test]
    fn empty_group_is_rejected() {
        let err = parse_lenient("()").unwrap_err();
        match err {
            NotationError::Syntax(e) => assert_eq!(e.offset, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        assert!(matches!(
            parse_lenient("(A) x"),
            Err(NotationError::Syntax(_))
        ));
    }
}
