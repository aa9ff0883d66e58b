use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{MonomialOrder, MAX_VARS};

/// Polynomial ring `k[x_1, ..., x_d]` with a default monomial order.
/// The maximal ideal is always the one generated by all variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Ring<F: Field> {
    names: Vec<String>,
    field: F,
    order: MonomialOrder,
}

impl<F: Field> Ring<F> {
    pub fn new<S: AsRef<str>>(names: &[S], field: F, order: MonomialOrder) -> Result<Arc<Self>> {
        if names.is_empty() {
            return Err(Error::InvalidRing("at least one variable is required".into()));
        }
        // one slot stays free for the auxiliary variable of intersections
        if names.len() >= MAX_VARS {
            return Err(Error::InvalidRing(format!("at most {} variables", MAX_VARS - 1)));
        }
        let mut seen = HashSet::new();
        for n in names {
            let n = n.as_ref();
            if !is_identifier(n) {
                return Err(Error::InvalidRing(format!("bad variable name `{n}`")));
            }
            if !seen.insert(n.to_string()) {
                return Err(Error::InvalidRing(format!("duplicate variable `{n}`")));
            }
        }
        if let MonomialOrder::Elimination { block } = order {
            if block == 0 || block > names.len() {
                return Err(Error::InvalidRing(format!("elimination block {block} out of range")));
            }
        }
        Ok(Arc::new(Self {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
            field,
            order,
        }))
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Same variables and field under another order.
    pub fn with_order(&self, order: MonomialOrder) -> Arc<Self> {
        Arc::new(Self {
            names: self.names.clone(),
            field: self.field.clone(),
            order,
        })
    }

    /// Adjoins a fresh first variable and uses an elimination order for it.
    pub(crate) fn with_eliminated_variable(&self) -> Arc<Self> {
        let mut names = vec![self.fresh_name()];
        names.extend(self.names.iter().cloned());
        Arc::new(Self {
            names,
            field: self.field.clone(),
            order: MonomialOrder::Elimination { block: 1 },
        })
    }

    fn fresh_name(&self) -> String {
        let mut name = "t".to_string();
        while self.names.contains(&name) {
            name.push('_');
        }
        name
    }

    /// Header text in the input grammar, e.g. `QQ[x,y,z]`.
    pub fn header(&self) -> String {
        format!("{}[{}]", self.field.name(), self.names.join(","))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(Ring::new(&["x", "x"], Rationals, MonomialOrder::DegRevLex).is_err());
        assert!(Ring::<Rationals>::new::<&str>(&[], Rationals, MonomialOrder::DegRevLex).is_err());
        assert!(Ring::new(&["1x"], Rationals, MonomialOrder::DegRevLex).is_err());
    }

    #[test]
    fn header_round_trip() {
        let r = Ring::new(&["x", "y"], Rationals, MonomialOrder::DegRevLex).unwrap();
        assert_eq!(r.header(), "QQ[x,y]");
        assert_eq!(r.var_index("y"), Some(1));
    }
}
