//! Text format for reaction networks.
//!
//! ```text
//! # comment
//! species: X1 X2 E            (optional; pins species order, may declare
//!                              species that occur in no complex)
//! intermediates: Y1 Y2        (optional)
//! X1 + 2X2 ->[k1] X3
//! A <=>[f][b] B               (expands to two reactions, forward first)
//! A -> B -> C                 (chains split pairwise)
//! 0 ->[k2] A                  (`0` is the empty complex)
//! A -> B ; B -> C             (`;` separates reactions on one line)
//! ```
//!
//! Omitted rate labels are generated as `k<i>` (or `kappa<i>` when the file
//! declares intermediates) with `i` the 1-based reaction index.

use std::collections::HashMap;

use super::{Complex, Reaction, ReactionNetwork, Species};
use crate::error::NetworkError;

/// Parser options.
#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Prefix for auto-generated rate symbols; default `k`, or `kappa` when
    /// the file declares intermediates.
    pub auto_rate_prefix: Option<String>,
}

struct RawReaction {
    reactant: Complex,
    product: Complex,
    label: Option<String>,
    line: usize,
    col: usize,
}

pub(super) fn parse_network(
    text: &str,
    opts: &ParseOptions,
) -> Result<ReactionNetwork, NetworkError> {
    let mut species: Vec<Species> = Vec::new();
    let mut species_idx: HashMap<String, usize> = HashMap::new();
    let mut intermediates: Vec<String> = Vec::new();
    let mut raw: Vec<RawReaction> = Vec::new();

    let intern = |species: &mut Vec<Species>,
                      species_idx: &mut HashMap<String, usize>,
                      name: &str| match species_idx.get(name) {
        Some(&i) => i,
        None => {
            let i = species.len();
            species.push(Species {
                name: name.to_string(),
            });
            species_idx.insert(name.to_string(), i);
            i
        }
    };

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match line.find('#') {
            Some(p) => &line[..p],
            None => line,
        };
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.trim_start().strip_prefix("species:") {
            for name in rest.split_whitespace() {
                check_name(name, lineno)?;
                intern(&mut species, &mut species_idx, name);
            }
            continue;
        }
        if let Some(rest) = line.trim_start().strip_prefix("intermediates:") {
            for name in rest.split_whitespace() {
                check_name(name, lineno)?;
                intermediates.push(name.to_string());
            }
            continue;
        }
        for stmt in line.split(';') {
            if stmt.trim().is_empty() {
                continue;
            }
            let mut lx = Lexer::new(stmt, lineno);
            parse_chain(&mut lx, &mut raw, |n| {
                intern(&mut species, &mut species_idx, n)
            })?;
        }
    }

    if raw.is_empty() {
        return Err(NetworkError::EmptyNetwork);
    }

    // resolve rate symbols: explicit labels win, the rest are numbered by
    // reaction position
    let prefix = opts
        .auto_rate_prefix
        .clone()
        .unwrap_or_else(|| if intermediates.is_empty() { "k" } else { "kappa" }.to_string());
    let explicit: std::collections::HashSet<String> = raw
        .iter()
        .filter_map(|r| r.label.clone())
        .collect();
    let mut reactions = Vec::with_capacity(raw.len());
    let mut complexes: Vec<Complex> = Vec::new();
    let mut complex_idx: HashMap<Complex, usize> = HashMap::new();
    let intern_complex = |complexes: &mut Vec<Complex>,
                              complex_idx: &mut HashMap<Complex, usize>,
                              c: Complex| match complex_idx.get(&c) {
        Some(&i) => i,
        None => {
            let i = complexes.len();
            complex_idx.insert(c.clone(), i);
            complexes.push(c);
            i
        }
    };
    for (i, r) in raw.into_iter().enumerate() {
        let rate_symbol = match r.label {
            Some(l) => l,
            None => {
                let auto = format!("{prefix}{}", i + 1);
                if explicit.contains(auto.as_str()) {
                    return Err(NetworkError::Syntax {
                        line: r.line,
                        col: r.col,
                        msg: format!(
                            "auto-generated rate symbol `{auto}` collides with an explicit label; label this reaction"
                        ),
                    });
                }
                auto
            }
        };
        let reactant = intern_complex(&mut complexes, &mut complex_idx, r.reactant);
        let product = intern_complex(&mut complexes, &mut complex_idx, r.product);
        reactions.push(Reaction {
            reactant,
            product,
            rate_symbol,
        });
    }

    for name in &intermediates {
        if !species_idx.contains_key(name) {
            return Err(NetworkError::UnknownSpecies(name.clone()));
        }
    }

    ReactionNetwork::build(species, complexes, reactions, intermediates)
}

fn check_name(name: &str, line: usize) -> Result<(), NetworkError> {
    let mut chars = name.chars();
    let ok = chars
        .next()
        .map(|c| c.is_ascii_alphabetic() || c == '_')
        .unwrap_or(false)
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
    if ok {
        Ok(())
    } else {
        Err(NetworkError::Syntax {
            line,
            col: 1,
            msg: format!("invalid species name `{name}`"),
        })
    }
}

fn parse_chain(
    lx: &mut Lexer<'_>,
    out: &mut Vec<RawReaction>,
    mut intern: impl FnMut(&str) -> usize,
) -> Result<(), NetworkError> {
    let mut left = parse_complex(lx, &mut intern)?;
    let mut progressed = false;
    loop {
        lx.skip_ws();
        if lx.at_end() {
            if !progressed {
                return lx.error("expected `->` or `<=>`");
            }
            return Ok(());
        }
        let (line, col) = (lx.line, lx.col());
        let arrow = lx.arrow()?;
        let labels = lx.labels()?;
        match (&arrow, labels.len()) {
            (Arrow::Forward, 0 | 1) => {}
            (Arrow::Reversible, 0 | 2) => {}
            (Arrow::Forward, n) => {
                return lx.error(format!("`->` takes at most one label, got {n}"))
            }
            (Arrow::Reversible, n) => {
                return lx.error(format!("`<=>` takes zero or two labels, got {n}"))
            }
        }
        let right = parse_complex(lx, &mut intern)?;
        if left == right {
            return Err(NetworkError::SelfLoop(format!("at line {line}")));
        }
        let mut labels = labels.into_iter();
        out.push(RawReaction {
            reactant: left.clone(),
            product: right.clone(),
            label: labels.next(),
            line,
            col,
        });
        if arrow == Arrow::Reversible {
            out.push(RawReaction {
                reactant: right.clone(),
                product: left.clone(),
                label: labels.next(),
                line,
                col,
            });
        }
        left = right;
        progressed = true;
    }
}

fn parse_complex(
    lx: &mut Lexer<'_>,
    intern: &mut impl FnMut(&str) -> usize,
) -> Result<Complex, NetworkError> {
    let mut parts: Vec<(usize, u32)> = Vec::new();
    loop {
        lx.skip_ws();
        let coeff = lx.maybe_uint()?;
        lx.skip_ws();
        match lx.maybe_name() {
            Some(name) => {
                let c = coeff.unwrap_or(1);
                if c == 0 {
                    return lx.error(format!("zero stoichiometric coefficient on `{name}`"));
                }
                parts.push((intern(name), c));
            }
            None => match coeff {
                // a bare `0` is the empty complex, only alone
                Some(0) if parts.is_empty() => {}
                Some(_) => return lx.error("expected a species name after the coefficient"),
                None => return lx.error("expected a complex"),
            },
        }
        lx.skip_ws();
        if !lx.eat('+') {
            break;
        }
    }
    Ok(Complex::from_parts(parts))
}

#[derive(PartialEq)]
enum Arrow {
    Forward,
    Reversible,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Lexer { src, pos: 0, line }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, NetworkError> {
        Err(NetworkError::Syntax {
            line: self.line,
            col: self.col(),
            msg: msg.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.rest().is_empty()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn arrow(&mut self) -> Result<Arrow, NetworkError> {
        if self.eat_str("<=>") {
            Ok(Arrow::Reversible)
        } else if self.eat_str("->") {
            Ok(Arrow::Forward)
        } else {
            self.error("expected `->` or `<=>`")
        }
    }

    fn labels(&mut self) -> Result<Vec<String>, NetworkError> {
        let mut out = Vec::new();
        while self.eat('[') {
            let end = match self.rest().find(']') {
                Some(e) => e,
                None => return self.error("unterminated label, expected `]`"),
            };
            let label = self.rest()[..end].trim().to_string();
            if label.is_empty() {
                return self.error("empty rate label");
            }
            self.pos += end + 1;
            out.push(label);
        }
        Ok(out)
    }

    fn maybe_uint(&mut self) -> Result<Option<u32>, NetworkError> {
        let digits: usize = self
            .rest()
            .chars()
            .take_while(|c| c.is_ascii_digit())
            .count();
        if digits == 0 {
            return Ok(None);
        }
        let text = &self.rest()[..digits];
        match text.parse::<u32>() {
            Ok(v) => {
                self.pos += digits;
                Ok(Some(v))
            }
            Err(_) => Err(NetworkError::BadStoichiometry(text.to_string())),
        }
    }

    fn maybe_name(&mut self) -> Option<&'a str> {
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = rest
            .char_indices()
            .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_' || *c == '\''))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        self.pos += end;
        Some(&rest[..end])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chains_split_pairwise() {
        let net = ReactionNetwork::parse("A ->[k1] B ->[k2] C").unwrap();
        assert_eq!(net.reactions().len(), 2);
        assert_eq!(net.reactions()[0].rate_symbol, "k1");
        assert_eq!(net.reactions()[1].rate_symbol, "k2");
    }

    #[test]
    fn reversible_labels() {
        let net = ReactionNetwork::parse("A <=>[kf][kb] B").unwrap();
        assert_eq!(net.reactions().len(), 2);
        assert_eq!(net.reactions()[0].rate_symbol, "kf");
        assert_eq!(net.reactions()[1].rate_symbol, "kb");
        assert_eq!(net.reactions()[0].reactant, net.reactions()[1].product);
    }

    #[test]
    fn zero_complex_and_coefficients() {
        let net = ReactionNetwork::parse("0 ->[k1] A ; A + 2 B ->[k2] 3C").unwrap();
        assert!(net.complexes()[0].is_zero());
        let r2 = &net.reactions()[1];
        let reactant = net.complex(r2.reactant);
        let b = net.species_index("B").unwrap();
        assert_eq!(reactant.coeff(b), 2);
        let c = net.species_index("C").unwrap();
        assert_eq!(net.complex(r2.product).coeff(c), 3);
    }

    #[test]
    fn species_header_pins_order() {
        let net =
            ReactionNetwork::parse("species: X3 X1 X2\nX1 ->[k1] X2").unwrap();
        let names: Vec<&str> = net.species().iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, vec!["X3", "X1", "X2"]);
    }

    #[test]
    fn duplicate_reaction_rejected() {
        let err = ReactionNetwork::parse("A ->[k1] B ; A ->[k2] B").unwrap_err();
        assert!(matches!(err, NetworkError::DuplicateReaction(_)));
    }

    #[test]
    fn self_loop_rejected() {
        let err = ReactionNetwork::parse("A + B -> A + B").unwrap_err();
        assert!(matches!(err, NetworkError::SelfLoop(_)));
    }

    #[test]
    fn syntax_error_position() {
        let err = ReactionNetwork::parse("A -> B\nB -> $").unwrap_err();
        match err {
            NetworkError::Syntax { line, col, .. } => {
                assert_eq!(line, 2);
                assert!(col >= 5);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn roundtrip_through_render() {
        let text = "species: X1 X2 X9\nintermediates: Y\nX1 + X2 <=>[a][b] Y\nY ->[c] 2X2\n";
        let net = ReactionNetwork::parse(text).unwrap();
        let again = ReactionNetwork::parse(&net.render()).unwrap();
        assert_eq!(net, again);
    }

    #[test]
    fn auto_labels_use_kappa_with_intermediates() {
        let net = ReactionNetwork::parse(
            "species: A B Y\nintermediates: Y\nA -> Y\nY -> B",
        )
        .unwrap();
        assert_eq!(net.reactions()[0].rate_symbol, "kappa1");
        assert_eq!(net.reactions()[1].rate_symbol, "kappa2");
    }
}
