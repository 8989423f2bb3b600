use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::LaurentError;

/// What a symbol stands for in the algebra it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Cluster,
    Frozen,
    /// Auxiliary frozen variable attached to the `+Id` block of an unfolding.
    TAux,
    /// Auxiliary frozen variable attached to the `-Id` block of an unfolding.
    SAux,
    /// Formal stand-in for a coefficient that is not itself a matrix column.
    Coefficient,
}

impl Role {
    pub fn is_cluster(self) -> bool {
        self == Role::Cluster
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::Cluster => "cluster",
            Role::Frozen => "frozen",
            Role::TAux => "t-aux",
            Role::SAux => "s-aux",
            Role::Coefficient => "coefficient",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub role: Role,
    pub group: Option<usize>,
}

/// Ordered, duplicate-free list of symbols. Indices are dense and stable.
#[derive(Debug, Clone, Default)]
pub struct VariableTable {
    symbols: Vec<Symbol>,
    index: HashMap<String, usize>,
}

pub type TableRef = Arc<VariableTable>;

impl PartialEq for VariableTable {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for VariableTable {}

impl VariableTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(
        &mut self,
        name: impl Into<String>,
        role: Role,
        group: Option<usize>,
    ) -> Result<usize, LaurentError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(LaurentError::Parse {
                pos: 0,
                message: format!("`{name}` is not a valid symbol name"),
            });
        }
        if self.index.contains_key(&name) {
            return Err(LaurentError::DuplicateSymbol(name));
        }
        let i = self.symbols.len();
        self.index.insert(name.clone(), i);
        self.symbols.push(Symbol { name, role, group });
        Ok(i)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, i: usize) -> &Symbol {
        &self.symbols[i]
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn name(&self, i: usize) -> &str {
        &self.symbols[i].name
    }

    pub fn role(&self, i: usize) -> Role {
        self.symbols[i].role
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<usize, LaurentError> {
        self.index_of(name)
            .ok_or_else(|| LaurentError::UnknownSymbol(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Returns `base` if unused, otherwise the first of `base2`, `base3`, ...
    pub fn fresh_name(&self, base: &str) -> String {
        if !self.contains(base) {
            return base.to_string();
        }
        (2..)
            .map(|i| format!("{base}{i}"))
            .find(|n| !self.contains(n))
            .expect("unbounded search")
    }

    pub fn into_ref(self) -> TableRef {
        Arc::new(self)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub(crate) fn same_table(a: &TableRef, b: &TableRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
