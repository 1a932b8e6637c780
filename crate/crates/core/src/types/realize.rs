use super::logic_type::LogicType;
use crate::finmod::{Compiled, EvalError, FiniteModel, Truth, Valuation};

/// A type compiled once against its signature, for checking many models.
pub struct Realizer {
    ty: LogicType,
    compiled: Vec<Compiled>,
}

impl Realizer {
    pub fn new(ty: &LogicType) -> Result<Realizer, EvalError> {
        let compiled = ty
            .sentences
            .iter()
            .map(|s| Compiled::new(&ty.sig, &ty.block, s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Realizer {
            ty: ty.clone(),
            compiled,
        })
    }

    pub fn logic_type(&self) -> &LogicType {
        &self.ty
    }

    /// The first valuation of the block (odometer order, last variable
    /// fastest) whose expansion satisfies every sentence, or `None` when `m`
    /// omits the type. `m` must be a total model over the type's signature.
    pub fn realizes(&self, m: &FiniteModel) -> Option<Valuation> {
        let sizes: Vec<usize> = self.ty.block.iter().map(|v| m.carrier_len(&v.sort)).collect();
        if sizes.contains(&0) {
            return None;
        }
        let tables: Vec<_> = self.compiled.iter().map(|c| c.actions(m)).collect();
        let mut envs: Vec<Vec<usize>> = self.compiled.iter().map(|c| vec![0; c.slot_count()]).collect();
        let k = sizes.len();
        let mut values = vec![0usize; k];
        loop {
            let ok = self.compiled.iter().zip(&tables).zip(envs.iter_mut()).all(|((c, t), env)| {
                env[..k].copy_from_slice(&values);
                c.eval(m, t, env) == Truth::True
            });
            if ok {
                return Some(self.ty.block.iter().cloned().zip(values).collect());
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                values[i] += 1;
                if values[i] < sizes[i] {
                    break;
                }
                values[i] = 0;
            }
        }
    }
}

/// Some valuation realizing `ty` in `m`, or `None` when `m` omits it.
pub fn realizes(m: &FiniteModel, ty: &LogicType) -> Result<Option<Valuation>, EvalError> {
    Ok(Realizer::new(ty)?.realizes(m))
}
