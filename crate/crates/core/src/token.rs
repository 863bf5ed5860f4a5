//! Element identifiers with a canonical printed form.
//!
//! Every element of every finite set in this crate is a [`Token`]. Atoms are
//! opaque names; composite tokens record how an element was built (a pair in a
//! product, a flattened chain in a horizontal composite, a tagged element of a
//! disjoint union). Equality and ordering are structural, and the printed form
//! parses back to the same token.

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Characters that may not appear inside an atom.
pub const RESERVED: &[char] = &['(', ')', '[', ']', ',', '#'];

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    /// An opaque name.
    Atom(Arc<str>),
    /// A tuple, printed `(a,b,...)`. Used for products, fiber products and
    /// function values.
    Tuple(Arc<[Token]>),
    /// A flattened composable chain, printed `[a,b,...]`.
    Chain(Arc<[Token]>),
    /// An element of the `i`-th summand of a disjoint union, printed `i#t`.
    Tag(u32, Arc<Token>),
}

impl Token {
    /// Builds an atom, rejecting empty names, whitespace and reserved characters.
    pub fn atom(name: &str) -> Result<Self> {
        if name.is_empty()
            || name.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c))
        {
            return Err(Error::InvalidToken(name.to_string()));
        }
        Ok(Token::Atom(Arc::from(name)))
    }

    pub fn tuple<I: IntoIterator<Item = Token>>(items: I) -> Self {
        Token::Tuple(items.into_iter().collect())
    }

    pub fn pair(a: &Token, b: &Token) -> Self {
        Token::Tuple(Arc::from([a.clone(), b.clone()]))
    }

    pub fn triple(a: &Token, b: &Token, c: &Token) -> Self {
        Token::Tuple(Arc::from([a.clone(), b.clone(), c.clone()]))
    }

    pub fn tag(index: u32, inner: &Token) -> Self {
        Token::Tag(index, Arc::new(inner.clone()))
    }

    /// Concatenates two tokens as a chain. Chains are spliced rather than
    /// nested, so `chain(chain(a,b),c) == chain(a,chain(b,c))`.
    pub fn chain(a: &Token, b: &Token) -> Self {
        let mut items = Vec::with_capacity(a.chain_len() + b.chain_len());
        items.extend_from_slice(a.chain_items());
        items.extend_from_slice(b.chain_items());
        Token::Chain(items.into())
    }

    /// The slots of a chain; any other token is a chain of length one.
    pub fn chain_items(&self) -> &[Token] {
        match self {
            Token::Chain(items) => items,
            other => core::slice::from_ref(other),
        }
    }

    pub fn chain_len(&self) -> usize {
        self.chain_items().len()
    }

    pub fn as_tuple(&self) -> Option<&[Token]> {
        match self {
            Token::Tuple(items) => Some(items),
            _ => None,
        }
    }

    pub fn as_tag(&self) -> Option<(u32, &Token)> {
        match self {
            Token::Tag(i, t) => Some((*i, t)),
            _ => None,
        }
    }

    /// Parses the canonical printed form.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parser = Parser { src: text, pos: 0 };
        let token = parser.token()?;
        if parser.pos != text.len() {
            return Err(Error::InvalidToken(text.to_string()));
        }
        Ok(token)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, items: &[Token], open: char, close: char) -> fmt::Result {
            write!(f, "{open}")?;
            for (i, t) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            write!(f, "{close}")
        }
        match self {
            Token::Atom(name) => f.write_str(name),
            Token::Tuple(items) => list(f, items, '(', ')'),
            Token::Chain(items) => list(f, items, '[', ']'),
            Token::Tag(i, t) => write!(f, "{i}#{t}"),
        }
    }
}

impl fmt::Debug for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn fail(&self) -> Error {
        Error::InvalidToken(self.src.to_string())
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn token(&mut self) -> Result<Token> {
        match self.peek() {
            Some('(') => Ok(Token::Tuple(self.list(')')?.into())),
            Some('[') => {
                let items = self.list(']')?;
                Ok(Token::Chain(items.into()))
            }
            Some(_) => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if RESERVED.contains(&c) {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
                let word = &self.src[start..self.pos];
                if self.peek() == Some('#') {
                    let index: u32 = word.parse().map_err(|_| self.fail())?;
                    if word != index.to_string() {
                        return Err(self.fail());
                    }
                    self.pos += 1;
                    let inner = self.token()?;
                    Ok(Token::Tag(index, Arc::new(inner)))
                } else {
                    Token::atom(word).map_err(|_| self.fail())
                }
            }
            None => Err(self.fail()),
        }
    }

    fn list(&mut self, close: char) -> Result<Vec<Token>> {
        self.pos += 1;
        let mut items = Vec::new();
        if self.peek() == Some(close) {
            self.pos += 1;
            return Ok(items);
        }
        loop {
            items.push(self.token()?);
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(items);
                }
                _ => return Err(self.fail()),
            }
        }
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Token {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use proptest::prelude::*;

    fn a(s: &str) -> Token {
        Token::atom(s).unwrap()
    }

    #[test]
    fn chain_is_flat() {
        let (x, y, z) = (a("x"), a("y"), a("z"));
        let left = Token::chain(&Token::chain(&x, &y), &z);
        let right = Token::chain(&x, &Token::chain(&y, &z));
        assert_eq!(left, right);
        assert_eq!(format!("{left}"), "[x,y,z]");
    }

    #[test]
    fn rejects_reserved_atoms() {
        assert!(Token::atom("a,b").is_err());
        assert!(Token::atom("").is_err());
        assert!(Token::atom("a b").is_err());
        assert!(Token::parse("(a,b").is_err());
        assert!(Token::parse("01#a").is_err());
    }

    #[test]
    fn empty_tuple_round_trips() {
        let t = Token::tuple([]);
        assert_eq!(format!("{t}"), "()");
        assert_eq!(Token::parse("()").unwrap(), t);
    }

    fn arb_token() -> impl Strategy<Value = Token> {
        let leaf = "[a-z0-9+-]{1,3}".prop_map(|s| Token::atom(&s).unwrap());
        leaf.prop_recursive(3, 16, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 0..3).prop_map(Token::tuple),
                prop::collection::vec(inner.clone(), 2..4)
                    .prop_map(|v| Token::Chain(v.into())),
                (0u32..3, inner).prop_map(|(i, t)| Token::tag(i, &t)),
            ]
        })
    }

    proptest! {
        #[test]
        fn printed_form_parses_back(t in arb_token()) {
            let printed = format!("{t}");
            prop_assert_eq!(Token::parse(&printed).unwrap(), t);
        }
    }
}
