use std::fmt;
use std::sync::Arc;

macro_rules! interned_name {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(name: impl AsRef<str>) -> Self {
                Self(Arc::from(name.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self::new(s)
            }
        }
    };
}

interned_name!(
    /// A sort name.
    Sort
);
interned_name!(
    /// A transition label name. Labels are polymorphic: a model interprets a
    /// label by one binary relation per sort.
    Label
);

/// A function symbol, identified by its full rank `name : arity -> result`.
///
/// Two symbols with the same name and different ranks are different symbols.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Op(Arc<OpDecl>);

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OpDecl {
    pub name: Arc<str>,
    pub arity: Vec<Sort>,
    pub result: Sort,
}

impl Op {
    pub fn new(name: impl AsRef<str>, arity: Vec<Sort>, result: Sort) -> Self {
        Op(Arc::new(OpDecl {
            name: Arc::from(name.as_ref()),
            arity,
            result,
        }))
    }

    pub fn constant(name: impl AsRef<str>, sort: Sort) -> Self {
        Op::new(name, Vec::new(), sort)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn arity(&self) -> &[Sort] {
        &self.0.arity
    }

    pub fn result(&self) -> &Sort {
        &self.0.result
    }

    pub fn is_constant(&self) -> bool {
        self.0.arity.is_empty()
    }

    /// Same symbol name with every sort passed through `f`.
    pub fn map_sorts(&self, mut f: impl FnMut(&Sort) -> Sort) -> Op {
        Op::new(
            self.name(),
            self.arity().iter().map(&mut f).collect(),
            f(self.result()),
        )
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :", self.name())?;
        for s in self.arity() {
            write!(f, " {s}")?;
        }
        write!(f, " -> {}", self.result())
    }
}

impl fmt::Debug for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
