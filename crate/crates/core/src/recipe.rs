//! JSON descriptions of localities: a group with a prime and `Δ` generators,
//! or a direct or central product of two such descriptions.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::group::{FiniteGroup, GroupFile};
use crate::locality::{group_locality, locality_from_group, Locality};
use crate::products::{direct_product_locality, hat_sublocality};
use crate::quotients::{external_central_product_locality, CentralProduct};
use crate::Elem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Name(String),
    Inline(GroupFile),
}

impl GroupSpec {
    pub fn load(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Name(name) => FiniteGroup::load(name),
            GroupSpec::Inline(file) => FiniteGroup::from_file(file.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pair {
    pub lhs: Box<Recipe>,
    pub rhs: Box<Recipe>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CentralPair {
    pub lhs: Box<Recipe>,
    pub rhs: Box<Recipe>,
    /// Generators of `Z` as pairs `(i, j)`, the element `i·|L2| + j` of
    /// `L1 × L2`.
    pub center: Vec<[Elem; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Recipe {
    /// `L_Δ(G)`; without generators `Δ` is every subgroup of `S`.
    Group {
        group: GroupSpec,
        p: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta_generators: Option<Vec<Vec<Elem>>>,
    },
    Direct {
        direct: Pair,
    },
    Central {
        central: CentralPair,
    },
}

/// A constructed locality together with the pieces it was built from.
pub enum Built {
    Plain(Locality),
    Direct { factors: Box<[Locality; 2]>, product: Locality, hats: Box<[Locality; 2]> },
    Central { factors: Box<[Locality; 2]>, cp: Box<CentralProduct> },
}

impl Built {
    pub fn locality(&self) -> &Locality {
        match self {
            Built::Plain(l) => l,
            Built::Direct { product, .. } => product,
            Built::Central { cp, .. } => &cp.quotient,
        }
    }

    /// The `i`-th factor as a sublocality of [`Self::locality`], for
    /// `i ∈ {1, 2}`.
    pub fn factor_sublocality(&self, i: usize) -> Option<&Locality> {
        if !(1..=2).contains(&i) {
            return None;
        }
        match self {
            Built::Plain(_) => None,
            Built::Direct { hats, .. } => Some(&hats[i - 1]),
            Built::Central { cp, .. } => Some(&cp.images[i - 1]),
        }
    }
}

impl Recipe {
    pub fn group(name: &str, p: usize) -> Self {
        Recipe::Group { group: GroupSpec::Name(name.into()), p, delta_generators: None }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("recipes serialize")
    }

    /// Reads a recipe file, or accepts `NAME` / `NAME:p` for the locality of
    /// a catalog group with every subgroup of `S` as an object (`p = 2` by
    /// default).
    pub fn load(arg: &str) -> Result<Self> {
        let path = Path::new(arg);
        if path.exists() {
            return Self::from_json(&std::fs::read_to_string(path)?);
        }
        let (name, p) = match arg.split_once(':') {
            Some((n, p)) => (n, p.parse().map_err(|_| Error::Input(format!("bad prime in `{arg}`")))?),
            None => (arg, 2),
        };
        if crate::catalog::by_name(name).is_none() {
            return input(format!("`{arg}` is neither a recipe file nor a catalog group"));
        }
        Ok(Self::group(name, p))
    }

    pub fn build(&self) -> Result<Built> {
        match self {
            Recipe::Group { group, p, delta_generators } => {
                let g = group.load()?;
                let loc = match delta_generators {
                    None => group_locality(&g, *p)?,
                    Some(gens) => {
                        let sets = gens
                            .iter()
                            .map(|gen| Ok(g.closure(gen)?.into_members()))
                            .collect::<Result<Vec<BTreeSet<Elem>>>>()?;
                        locality_from_group(&g, *p, &sets)?
                    }
                };
                Ok(Built::Plain(loc))
            }
            Recipe::Direct { direct } => {
                let factors = [direct.lhs.build_plain()?, direct.rhs.build_plain()?];
                let product = direct_product_locality(&factors[0], &factors[1])?;
                let hats = [hat_sublocality(&product, &factors[0], 1)?, hat_sublocality(&product, &factors[1], 2)?];
                Ok(Built::Direct { factors: Box::new(factors), product, hats: Box::new(hats) })
            }
            Recipe::Central { central } => {
                let factors = [central.lhs.build_plain()?, central.rhs.build_plain()?];
                let (n1, n2) = (factors[0].pg().size(), factors[1].pg().size());
                let mut gens = Vec::with_capacity(central.center.len());
                for &[i, j] in &central.center {
                    if i >= n1 || j >= n2 {
                        return input(format!("center generator ({i}, {j}) is out of range"));
                    }
                    gens.push(i * n2 + j);
                }
                let product = direct_product_locality(&factors[0], &factors[1])?;
                let z = generated(product.pg(), &gens)?;
                let cp = external_central_product_locality(&factors[0], &factors[1], &z)?;
                Ok(Built::Central { factors: Box::new(factors), cp: Box::new(cp) })
            }
        }
    }

    fn build_plain(&self) -> Result<Locality> {
        match self.build()? {
            Built::Plain(l) => Ok(l),
            Built::Direct { product, .. } => Ok(product),
            Built::Central { cp, .. } => Ok(cp.quotient),
        }
    }
}

/// The closure of `gens ∪ {1}` under the partial product, which must be
/// defined on every pair met.
fn generated(pg: &crate::partial_group::PartialGroup, gens: &[Elem]) -> Result<BTreeSet<Elem>> {
    let mut set: BTreeSet<Elem> = gens.iter().copied().chain([0]).collect();
    loop {
        let current: Vec<Elem> = set.iter().copied().collect();
        let before = set.len();
        for &a in &current {
            for &b in &current {
                match pg.evaluate(&[a, b]) {
                    Some(c) => {
                        set.insert(c);
                    }
                    None => return input(format!("({}, {}) is not in the domain", pg.label(a), pg.label(b))),
                }
            }
        }
        if set.len() == before {
            return Ok(set);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recipes_round_trip_through_json() {
        let r = Recipe::Central {
            central: CentralPair {
                lhs: Box::new(Recipe::group("D8", 2)),
                rhs: Box::new(Recipe::group("D8", 2)),
                center: vec![[5, 5]],
            },
        };
        assert_eq!(Recipe::from_json(&r.to_json()).unwrap(), r);
        let text = r#"{"group": "S4", "p": 2, "delta_generators": [[1]]}"#;
        assert!(matches!(Recipe::from_json(text).unwrap(), Recipe::Group { .. }));
    }

    #[test]
    fn shorthand_names_catalog_groups() {
        assert_eq!(Recipe::load("S3:3").unwrap(), Recipe::group("S3", 3));
        assert!(Recipe::load("nope").is_err());
    }

    #[test]
    fn d8_central_recipe_builds_32_elements() {
        let g = crate::catalog::d8();
        let z = g.center().into_members().into_iter().find(|&x| x != 0).unwrap();
        let r = Recipe::Central {
            central: CentralPair {
                lhs: Box::new(Recipe::group("D8", 2)),
                rhs: Box::new(Recipe::group("D8", 2)),
                center: vec![[z, z]],
            },
        };
        let built = r.build().unwrap();
        assert_eq!(built.locality().pg().size(), 32);
        assert!(built.factor_sublocality(2).is_some());
    }
}
