//! Token regular expressions.
//!
//! Literals are whole action names separated by whitespace or operators;
//! the operators are `|`, postfix `*` and parentheses. `%empty` denotes the
//! empty word and `%none` the empty language. `delta` (or `δ`) denotes the
//! quiescence token.

use std::collections::{HashMap, VecDeque};

use super::{minimize, Dfsa};
use crate::action::Action;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenRegex {
    Nothing,
    Epsilon,
    Literal(usize),
    Concat(Vec<TokenRegex>),
    Alt(Vec<TokenRegex>),
    Star(Box<TokenRegex>),
}

impl TokenRegex {
    /// Parses `src`, resolving literals against `alphabet`.
    pub fn parse(src: &str, alphabet: &[Action]) -> Result<Self> {
        let tokens = lex(src)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            alphabet,
        };
        let re = p.alt()?;
        match p.peek() {
            None => Ok(re),
            Some(t) => Err(Error::Regex(format!("unexpected `{t}`"))),
        }
    }

    /// The finite language consisting of `words`.
    pub fn finite(words: &[Vec<usize>]) -> Self {
        TokenRegex::Alt(
            words
                .iter()
                .map(|w| TokenRegex::Concat(w.iter().map(|&s| TokenRegex::Literal(s)).collect()))
                .collect(),
        )
    }

    /// Minimal complete automaton for this expression.
    pub fn to_dfsa(&self, alphabet: &[Action]) -> Dfsa {
        let mut nfa = Nfa::default();
        let (start, end) = nfa.build(self);
        minimize(&nfa.determinize(start, end, alphabet))
    }
}

/// Compiles a single-line token regex into a minimal complete automaton.
pub fn compile_regex(src: &str, alphabet: &[Action]) -> Result<Dfsa> {
    Ok(TokenRegex::parse(src, alphabet)?.to_dfsa(alphabet))
}

/// Compiles a regex file. Blank lines and `#` comments are ignored except
/// for a leading `#finite` directive, after which every line is one word.
/// A file without expressions denotes the empty language; several lines
/// denote the finite language of those lines.
pub fn compile_regex_file(text: &str, alphabet: &[Action]) -> Result<Dfsa> {
    let mut finite = false;
    let mut lines = Vec::new();
    for raw in text.lines() {
        let trimmed = raw.trim();
        if lines.is_empty() && !finite && trimmed == "#finite" {
            finite = true;
            continue;
        }
        let line = trimmed.split('#').next().unwrap().trim();
        if !line.is_empty() {
            lines.push(line);
        }
    }
    if lines.is_empty() {
        return Ok(Dfsa::empty_language(alphabet.to_vec()));
    }
    if !finite && lines.len() == 1 {
        return compile_regex(lines[0], alphabet);
    }
    let words = lines
        .iter()
        .map(|line| {
            line.split_whitespace()
                .filter(|t| *t != "%empty")
                .map(|t| literal(t, alphabet))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TokenRegex::finite(&words).to_dfsa(alphabet))
}

fn literal(name: &str, alphabet: &[Action]) -> Result<usize> {
    let action = Action::parse_observable(name)
        .map_err(|_| Error::Regex(format!("invalid literal `{name}`")))?;
    alphabet
        .iter()
        .position(|a| *a == action)
        .ok_or_else(|| Error::Regex(format!("literal `{name}` outside alphabet")))
}

fn lex(src: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in src.chars() {
        match c {
            '(' | ')' | '|' | '*' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' || c == '%' || c == 'δ' => cur.push(c),
            c => return Err(Error::Regex(format!("unexpected character `{c}`"))),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<String>,
    pos: usize,
    alphabet: &'a [Action],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(String::as_str)
    }

    fn alt(&mut self) -> Result<TokenRegex> {
        let mut branches = vec![self.concat()?];
        while self.peek() == Some("|") {
            self.pos += 1;
            branches.push(self.concat()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            TokenRegex::Alt(branches)
        })
    }

    fn concat(&mut self) -> Result<TokenRegex> {
        let mut parts = Vec::new();
        while matches!(self.peek(), Some(t) if t != "|" && t != ")") {
            parts.push(self.postfix()?);
        }
        match parts.len() {
            0 => Err(Error::Regex(match self.peek() {
                Some(t) => format!("expected expression before `{t}`"),
                None => "expected expression".to_string(),
            })),
            1 => Ok(parts.pop().unwrap()),
            _ => Ok(TokenRegex::Concat(parts)),
        }
    }

    fn postfix(&mut self) -> Result<TokenRegex> {
        let mut re = self.atom()?;
        while self.peek() == Some("*") {
            self.pos += 1;
            re = TokenRegex::Star(Box::new(re));
        }
        Ok(re)
    }

    fn atom(&mut self) -> Result<TokenRegex> {
        let tok = self
            .peek()
            .ok_or_else(|| Error::Regex("unexpected end of expression".into()))?
            .to_string();
        self.pos += 1;
        match tok.as_str() {
            "(" => {
                let inner = self.alt()?;
                if self.peek() != Some(")") {
                    return Err(Error::Regex("unbalanced `(`".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            "*" => Err(Error::Regex("`*` without operand".into())),
            "%empty" => Ok(TokenRegex::Epsilon),
            "%none" => Ok(TokenRegex::Nothing),
            name => literal(name, self.alphabet).map(TokenRegex::Literal),
        }
    }
}

/// Thompson automaton with ε-moves.
#[derive(Default)]
struct Nfa {
    eps: Vec<Vec<usize>>,
    moves: Vec<Vec<(usize, usize)>>,
}

impl Nfa {
    fn state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.moves.push(Vec::new());
        self.eps.len() - 1
    }

    fn build(&mut self, re: &TokenRegex) -> (usize, usize) {
        let (s, e) = (self.state(), self.state());
        match re {
            TokenRegex::Nothing => {}
            TokenRegex::Epsilon => self.eps[s].push(e),
            TokenRegex::Literal(sym) => self.moves[s].push((*sym, e)),
            TokenRegex::Concat(parts) => {
                let mut cur = s;
                for p in parts {
                    let (ps, pe) = self.build(p);
                    self.eps[cur].push(ps);
                    cur = pe;
                }
                self.eps[cur].push(e);
            }
            TokenRegex::Alt(branches) => {
                for b in branches {
                    let (bs, be) = self.build(b);
                    self.eps[s].push(bs);
                    self.eps[be].push(e);
                }
            }
            TokenRegex::Star(inner) => {
                let (is, ie) = self.build(inner);
                self.eps[s].extend([is, e]);
                self.eps[ie].extend([is, e]);
            }
        }
        (s, e)
    }

    fn closure(&self, seeds: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut seen = vec![false; self.eps.len()];
        let mut stack: Vec<usize> = seeds.into_iter().collect();
        let mut out = Vec::new();
        while let Some(s) = stack.pop() {
            if std::mem::replace(&mut seen[s], true) {
                continue;
            }
            out.push(s);
            stack.extend(self.eps[s].iter().copied());
        }
        out.sort_unstable();
        out
    }

    fn determinize(&self, start: usize, end: usize, alphabet: &[Action]) -> Dfsa {
        let init = self.closure([start]);
        let mut dfa = Dfsa::new(alphabet.to_vec(), init.binary_search(&end).is_ok());
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::from([(init.clone(), 0)]);
        let mut queue = VecDeque::from([init]);
        while let Some(set) = queue.pop_front() {
            let id = ids[&set];
            for sym in 0..alphabet.len() {
                let targets: Vec<usize> = set
                    .iter()
                    .flat_map(|&s| {
                        self.moves[s]
                            .iter()
                            .filter(|(l, _)| *l == sym)
                            .map(|&(_, t)| t)
                    })
                    .collect();
                if targets.is_empty() {
                    continue;
                }
                let next = self.closure(targets);
                let target = match ids.get(&next) {
                    Some(&t) => t,
                    None => {
                        let t = dfa.add_state(next.binary_search(&end).is_ok());
                        ids.insert(next.clone(), t);
                        queue.push_back(next);
                        t
                    }
                };
                dfa.set_next(id, sym, target);
            }
        }
        dfa
    }
}
