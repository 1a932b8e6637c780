use crate::kernel::{Sentence, Sort, Term, Variable};

/// `γ_{s,n} = ∀x1..x_{n+1} . ∨_{i≠j} xi = xj`: the carrier of `s` has at
/// most `n` elements. For `n = 0` this is `∀x1 . ∨∅`.
pub fn gamma_sentence(sort: &Sort, n: usize) -> Sentence {
    let xs: Vec<Variable> = (1..=n + 1).map(|i| Variable::new(format!("x{i}"), sort.clone())).collect();
    let mut disjuncts = Vec::new();
    for (i, a) in xs.iter().enumerate() {
        for (j, b) in xs.iter().enumerate() {
            if i != j {
                disjuncts.push(Sentence::eq(Term::var(a.clone()), Term::var(b.clone())));
            }
        }
    }
    Sentence::forall(xs, Sentence::Or(disjuncts))
}
