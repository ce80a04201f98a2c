use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Coeff, Rational};

/// Linear form over the system's variables, stored densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, var: usize) -> &Rational {
        &self.coeffs[var]
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

/// Pointwise constraints on nonnegative unknowns, one per distribution:
/// each disjoint pair has at least one member equal to zero, and all
/// equality forms take one common value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    variables: Vec<String>,
    disjoint_pairs: Vec<(usize, usize)>,
    equality_groups: Vec<LinearForm>,
}

impl ConstraintSystem {
    pub fn new(
        variables: &[&str],
        disjoint_pairs: &[(&str, &str)],
        equality_groups: &[Vec<(&str, Rational)>],
    ) -> Result<Self> {
        let variables: Vec<String> = variables.iter().map(|s| s.to_string()).collect();
        let index = |name: &str| {
            variables
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::InvalidSystem(format!("undeclared variable `{name}`")))
        };
        let pairs = disjoint_pairs
            .iter()
            .map(|(a, b)| Ok((index(a)?, index(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let groups = equality_groups
            .iter()
            .map(|terms| {
                let mut coeffs = vec![Rational::zero(); variables.len()];
                for (name, c) in terms {
                    coeffs[index(name)?] += c;
                }
                Ok(LinearForm { coeffs })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(variables, pairs, groups)
    }

    fn from_parts(
        variables: Vec<String>,
        disjoint_pairs: Vec<(usize, usize)>,
        equality_groups: Vec<LinearForm>,
    ) -> Result<Self> {
        for (i, v) in variables.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::InvalidSystem("empty variable name".into()));
            }
            if variables[..i].contains(v) {
                return Err(Error::InvalidSystem(format!("duplicate variable `{v}`")));
            }
        }
        for (i, &(a, b)) in disjoint_pairs.iter().enumerate() {
            if a >= variables.len() || b >= variables.len() {
                return Err(Error::InvalidSystem("pair references undeclared variable".into()));
            }
            if a == b {
                return Err(Error::InvalidSystem(format!(
                    "pair ({0}, {0}) repeats a variable",
                    variables[a]
                )));
            }
            let same = |&(x, y): &(usize, usize)| (x, y) == (a, b) || (x, y) == (b, a);
            if disjoint_pairs[..i].iter().any(same) {
                return Err(Error::InvalidSystem(format!(
                    "duplicate pair ({}, {})",
                    variables[a], variables[b]
                )));
            }
        }
        Ok(ConstraintSystem {
            variables,
            disjoint_pairs,
            equality_groups,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn disjoint_pairs(&self) -> &[(usize, usize)] {
        &self.disjoint_pairs
    }

    pub fn equality_groups(&self) -> &[LinearForm] {
        &self.equality_groups
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Copy without the `i`-th equality form.
    pub fn without_group(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.equality_groups.remove(i);
        s
    }

    /// Copy without the `i`-th disjoint pair.
    pub fn without_pair(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.disjoint_pairs.remove(i);
        s
    }

    /// Renames variables through `map`; names absent from it are kept.
    pub fn renamed(&self, map: &BTreeMap<String, String>) -> Result<Self> {
        let variables = self
            .variables
            .iter()
            .map(|v| map.get(v).cloned().unwrap_or_else(|| v.clone()))
            .collect();
        Self::from_parts(variables, self.disjoint_pairs.clone(), self.equality_groups.clone())
    }

    /// True when the two systems have the same variables (as a set), the same
    /// unordered pairs and the same forms (as a set), up to declaration order.
    pub fn same_constraints(&self, other: &ConstraintSystem) -> bool {
        let mut mine: Vec<&String> = self.variables.iter().collect();
        let mut theirs: Vec<&String> = other.variables.iter().collect();
        mine.sort();
        theirs.sort();
        if mine != theirs {
            return false;
        }
        let pair_names = |s: &ConstraintSystem| {
            let mut p: Vec<(String, String)> = s
                .disjoint_pairs
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (s.variables[a].clone(), s.variables[b].clone());
                    if x <= y {
                        (x, y)
                    } else {
                        (y, x)
                    }
                })
                .collect();
            p.sort();
            p
        };
        let form_maps = |s: &ConstraintSystem| {
            let mut f: Vec<BTreeMap<String, Rational>> = s
                .equality_groups
                .iter()
                .map(|g| {
                    g.coeffs
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(i, c)| (s.variables[i].clone(), c.clone()))
                        .collect()
                })
                .collect();
            f.sort();
            f
        };
        pair_names(self) == pair_names(other) && form_maps(self) == form_maps(other)
    }

    /// Human-readable form, e.g. `½a + ½A`.
    pub fn format_form(&self, form: &LinearForm) -> String {
        self.format_terms(form.coeffs.iter().enumerate().map(|(i, c)| (i, c.clone())))
    }

    pub(crate) fn format_terms(&self, terms: impl Iterator<Item = (usize, Rational)>) -> String {
        let mut out = String::new();
        for (i, c) in terms.filter(|(_, c)| !c.is_zero()) {
            let mag = c.abs();
            let body = if mag.is_one() {
                self.variables[i].clone()
            } else {
                let p = rational::pretty(&mag);
                if p.contains('/') {
                    format!("({p})·{}", self.variables[i])
                } else {
                    format!("{p}{}", self.variables[i])
                }
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('−');
                }
            } else {
                out.push_str(if c.is_negative() { " − " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for ConstraintSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variables: {}", self.variables.join(", "))?;
        for &(a, b) in &self.disjoint_pairs {
            writeln!(f, "  {}·{} = 0", self.variables[a], self.variables[b])?;
        }
        for g in &self.equality_groups {
            writeln!(f, "  ν = {}", self.format_form(g))?;
        }
        Ok(())
    }
}

struct FormDoc<'a> {
    system: &'a ConstraintSystem,
    form: &'a LinearForm,
}

impl Serialize for FormDoc<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<_> = self
            .form
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut map = s.serialize_map(Some(terms.len()))?;
        for (i, c) in terms {
            map.serialize_entry(&self.system.variables[i], &Coeff(c.clone()))?;
        }
        map.end()
    }
}

impl Serialize for ConstraintSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Doc<'a> {
            variables: &'a [String],
            disjoint_pairs: Vec<[&'a str; 2]>,
            equality_groups: Vec<FormDoc<'a>>,
        }
        Doc {
            variables: &self.variables,
            disjoint_pairs: self
                .disjoint_pairs
                .iter()
                .map(|&(a, b)| [self.variables[a].as_str(), self.variables[b].as_str()])
                .collect(),
            equality_groups: self
                .equality_groups
                .iter()
                .map(|form| FormDoc { system: self, form })
                .collect(),
        }
        .serialize(s)
    }
}

#[derive(Deserialize)]
struct SystemDoc {
    variables: Vec<String>,
    #[serde(default)]
    disjoint_pairs: Vec<[String; 2]>,
    #[serde(default)]
    equality_groups: Vec<BTreeMap<String, Coeff>>,
}

impl<'de> Deserialize<'de> for ConstraintSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = SystemDoc::deserialize(d)?;
        let vars: Vec<&str> = doc.variables.iter().map(String::as_str).collect();
        let pairs: Vec<(&str, &str)> = doc
            .disjoint_pairs
            .iter()
            .map(|[a, b]| (a.as_str(), b.as_str()))
            .collect();
        let groups: Vec<Vec<(&str, Rational)>> = doc
            .equality_groups
            .iter()
            .map(|g| g.iter().map(|(k, c)| (k.as_str(), c.0.clone())).collect())
            .collect();
        ConstraintSystem::new(&vars, &pairs, &groups).map_err(serde::de::Error::custom)
    }
}
