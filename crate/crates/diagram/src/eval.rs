//! Evaluation of terms to natural transformations.

use fincat::functor::{horizontal, vertical};
use fincat::{Functor, NatTrans};

use crate::ast::Term;
use crate::env::{typecheck, Environment};
use crate::DiagramError;

/// The natural transformation a well-typed term denotes. Horizontal
/// composites are computed along both sides of the sliding square, and a
/// disagreement is reported as an error.
pub fn evaluate(term: &Term, env: &Environment) -> Result<NatTrans, DiagramError> {
    typecheck(term, env)?;
    eval(term, env)
}

fn eval(term: &Term, env: &Environment) -> Result<NatTrans, DiagramError> {
    match term {
        Term::Gen(g) => Ok(env.generator(g)?.nat.clone()),
        Term::Id(x) => match env.functor(x) {
            Ok(f) => Ok(NatTrans::identity(f)),
            Err(_) => {
                let c = env.category(x)?;
                Ok(NatTrans::identity(&Functor::identity(c).with_name(format!("id_{x}"))))
            }
        },
        Term::V(ts) => {
            let mut acc = eval(&ts[0], env)?;
            for t in &ts[1..] {
                acc = vertical(&eval(t, env)?, &acc)?;
            }
            Ok(acc)
        }
        Term::H(ts) => {
            let mut acc = eval(ts.last().unwrap(), env)?;
            for t in ts[..ts.len() - 1].iter().rev() {
                acc = horizontal(&eval(t, env)?, &acc)?;
            }
            Ok(acc)
        }
    }
}
