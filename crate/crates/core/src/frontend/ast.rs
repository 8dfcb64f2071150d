use crate::algebra::Coeff;

/// An index slot: a literal value or an index name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum IndexArg {
    Lit(usize),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Expr {
    Num(Coeff),
    /// `name`, `name[i, j]`, `name[i; λ, μ]` or `name[; λ]`.
    Sym {
        name: String,
        idx: Vec<IndexArg>,
        jet: Vec<IndexArg>,
        offset: usize,
    },
    Sum(Vec<Expr>),
    Neg(Box<Expr>),
    Product(Vec<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
    /// `d[λ, μ](body)`.
    Deriv {
        idx: Vec<IndexArg>,
        body: Box<Expr>,
        offset: usize,
    },
}

impl Expr {
    /// Names occurring in this node's own index slots, with multiplicity.
    pub(crate) fn own_names(&self) -> Vec<&str> {
        let slots: &[IndexArg] = match self {
            Expr::Deriv { idx, .. } => idx,
            _ => &[],
        };
        let mut out: Vec<&str> = slots
            .iter()
            .filter_map(|a| match a {
                IndexArg::Name(n) => Some(n.as_str()),
                IndexArg::Lit(_) => None,
            })
            .collect();
        if let Expr::Sym { idx, jet, .. } = self {
            out.extend(idx.iter().chain(jet).filter_map(|a| match a {
                IndexArg::Name(n) => Some(n.as_str()),
                IndexArg::Lit(_) => None,
            }));
        }
        out
    }
}
