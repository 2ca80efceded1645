//! Recursive functions over the naturals, built from zero, successor and
//! projections by composition, primitive recursion and budgeted minimization.
//!
//! Terms are arity-checked as a whole before evaluation; evaluation then
//! charges one budget unit per visited node, so `mu` probes are paid for and
//! a diverging search degrades to `OutOfBudget` instead of hanging.  Wrapped
//! as structural maps (see [`wrap_term`]) both `Undefined` and `OutOfBudget`
//! collapse to partiality.

use crate::data::{AbstractDataStructure, DataDomain, DomainKind, StructuralMap};
use crate::error::{Error, Result};
use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecFunTerm {
    Zero,
    Succ,
    /// 1-indexed projection `proj(i, n)` of an `n`-tuple.
    Proj(usize, usize),
    /// `comp(f, [g1..gk])` with `k` the arity of `f`; all `gi` share an arity.
    Comp(Box<RecFunTerm>, Vec<RecFunTerm>),
    /// `primrec(base, step)` recurses on the first argument; `step` receives
    /// `(counter, previous, rest...)`.
    PrimRec(Box<RecFunTerm>, Box<RecFunTerm>),
    /// `mu(f)` searches the least first argument on which `f` vanishes.
    Mu(Box<RecFunTerm>),
}

impl RecFunTerm {
    /// Arity of the denoted function; errors if any subterm is inconsistent.
    pub fn arity(&self) -> Result<usize> {
        match self {
            RecFunTerm::Zero => Ok(0),
            RecFunTerm::Succ => Ok(1),
            RecFunTerm::Proj(i, n) => {
                if *i >= 1 && i <= n {
                    Ok(*n)
                } else {
                    Err(Error::ArityMismatch(format!("proj {i} of {n}")))
                }
            }
            RecFunTerm::Comp(f, gs) => {
                let k = f.arity()?;
                if gs.len() != k {
                    return Err(Error::ArityMismatch(format!(
                        "comp of a {k}-ary head with {} arguments",
                        gs.len()
                    )));
                }
                if gs.is_empty() {
                    return Err(Error::ArityMismatch(
                        "comp with no inner functions (use the head directly)".into(),
                    ));
                }
                let m = gs[0].arity()?;
                for g in &gs[1..] {
                    if g.arity()? != m {
                        return Err(Error::ArityMismatch(
                            "comp arguments have unequal arities".into(),
                        ));
                    }
                }
                Ok(m)
            }
            RecFunTerm::PrimRec(base, step) => {
                let n = base.arity()?;
                if step.arity()? != n + 2 {
                    return Err(Error::ArityMismatch(format!(
                        "primrec with a {n}-ary base needs a {}-ary step",
                        n + 2
                    )));
                }
                Ok(n + 1)
            }
            RecFunTerm::Mu(f) => {
                let n = f.arity()?;
                if n == 0 {
                    return Err(Error::ArityMismatch("mu of a nullary function".into()));
                }
                Ok(n - 1)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eval {
    Value(u64),
    Undefined,
    OutOfBudget,
}

enum Stop {
    Undefined,
    OutOfBudget,
}

/// Evaluates a term on a tuple of naturals under a node budget.
pub fn eval(term: &RecFunTerm, args: &[u64], budget: u64) -> Result<Eval> {
    let arity = term.arity()?;
    if args.len() != arity {
        return Err(Error::ArityMismatch(format!(
            "term of arity {arity} applied to {} arguments",
            args.len()
        )));
    }
    let mut budget = budget;
    Ok(match eval_inner(term, args, &mut budget) {
        Ok(v) => Eval::Value(v),
        Err(Stop::Undefined) => Eval::Undefined,
        Err(Stop::OutOfBudget) => Eval::OutOfBudget,
    })
}

fn eval_inner(term: &RecFunTerm, args: &[u64], budget: &mut u64) -> std::result::Result<u64, Stop> {
    if *budget == 0 {
        return Err(Stop::OutOfBudget);
    }
    *budget -= 1;
    match term {
        RecFunTerm::Zero => Ok(0),
        RecFunTerm::Succ => args[0].checked_add(1).ok_or(Stop::Undefined),
        RecFunTerm::Proj(i, _) => Ok(args[i - 1]),
        RecFunTerm::Comp(f, gs) => {
            let mut inner = Vec::with_capacity(gs.len());
            for g in gs {
                inner.push(eval_inner(g, args, budget)?);
            }
            eval_inner(f, &inner, budget)
        }
        RecFunTerm::PrimRec(base, step) => {
            let count = args[0];
            let rest = &args[1..];
            let mut acc = eval_inner(base, rest, budget)?;
            let mut step_args = vec![0; rest.len() + 2];
            step_args[2..].copy_from_slice(rest);
            for k in 0..count {
                step_args[0] = k;
                step_args[1] = acc;
                acc = eval_inner(step, &step_args, budget)?;
            }
            Ok(acc)
        }
        RecFunTerm::Mu(f) => {
            let mut probe_args = vec![0; args.len() + 1];
            probe_args[1..].copy_from_slice(args);
            for y in 0.. {
                probe_args[0] = y;
                if eval_inner(f, &probe_args, budget)? == 0 {
                    return Ok(y);
                }
            }
            unreachable!("search range is unbounded")
        }
    }
}

/// Packages a term as a structural map on the naturals; both undefinedness
/// and budget exhaustion surface as partiality.
pub fn wrap_term(name: impl Into<String>, term: &RecFunTerm, budget: u64) -> Result<StructuralMap> {
    let arity = term.arity()?;
    let term = term.clone();
    Ok(StructuralMap::new(name, arity, 1, move |args| {
        let nats: Option<Vec<u64>> = args.iter().map(|v| v.as_nat()).collect();
        match eval(&term, &nats?, budget).ok()? {
            Eval::Value(v) => Some(vec![Value::Nat(v)]),
            Eval::Undefined | Eval::OutOfBudget => None,
        }
    }))
}

/// The data structure whose map family is the recursive functions: it starts
/// with no maps and grows by [`wrap_term`]-ing whichever terms a client
/// needs, all sharing one evaluation budget.
pub fn recursive_functions(budget: u64, terms: &[(&str, RecFunTerm)]) -> Result<AbstractDataStructure> {
    let mut s = AbstractDataStructure::new(
        "recursive_functions",
        DataDomain::new("nat", DomainKind::Nat),
    );
    for (name, term) in terms {
        s.add_map(wrap_term(*name, term, budget)?);
    }
    Ok(s)
}

/// `add = primrec(proj(1,1), comp(succ, proj(2,3)))`.
pub fn addition_term() -> RecFunTerm {
    RecFunTerm::PrimRec(
        Box::new(RecFunTerm::Proj(1, 1)),
        Box::new(RecFunTerm::Comp(
            Box::new(RecFunTerm::Succ),
            vec![RecFunTerm::Proj(2, 3)],
        )),
    )
}

/// The constantly-zero unary function, `primrec(zero, proj(2,2))`.
pub fn constant_zero_unary() -> RecFunTerm {
    RecFunTerm::PrimRec(Box::new(RecFunTerm::Zero), Box::new(RecFunTerm::Proj(2, 2)))
}

/// The constantly-one unary function; its `mu` never finds a zero.
pub fn constant_one_unary() -> RecFunTerm {
    RecFunTerm::Comp(Box::new(RecFunTerm::Succ), vec![constant_zero_unary()])
}

/// `mult = primrec(const0, comp(add, proj(2,3), proj(3,3)))`.
pub fn multiplication_term() -> RecFunTerm {
    RecFunTerm::PrimRec(
        Box::new(constant_zero_unary()),
        Box::new(RecFunTerm::Comp(
            Box::new(addition_term()),
            vec![RecFunTerm::Proj(2, 3), RecFunTerm::Proj(3, 3)],
        )),
    )
}

// ---------------------------------------------------------------------------
// S-expression syntax

pub fn render_term(term: &RecFunTerm) -> String {
    match term {
        RecFunTerm::Zero => "zero".into(),
        RecFunTerm::Succ => "succ".into(),
        RecFunTerm::Proj(i, n) => format!("(proj {i} {n})"),
        RecFunTerm::Comp(f, gs) => {
            let parts: Vec<String> = gs.iter().map(render_term).collect();
            format!("(comp {} {})", render_term(f), parts.join(" "))
        }
        RecFunTerm::PrimRec(b, s) => format!("(primrec {} {})", render_term(b), render_term(s)),
        RecFunTerm::Mu(f) => format!("(mu {})", render_term(f)),
    }
}

pub fn parse_term(text: &str) -> Result<RecFunTerm> {
    let tokens = crate::logic::tokenize(text)?;
    let (term, rest) = parse_tokens(&tokens)?;
    if !rest.is_empty() {
        return Err(Error::Parse(format!("trailing input after term: `{}`", rest.join(" "))));
    }
    Ok(term)
}

fn parse_tokens<'a>(tokens: &'a [String]) -> Result<(RecFunTerm, &'a [String])> {
    let (head, mut rest) = tokens
        .split_first()
        .ok_or_else(|| Error::Parse("unexpected end of term".into()))?;
    match head.as_str() {
        "zero" => Ok((RecFunTerm::Zero, rest)),
        "succ" => Ok((RecFunTerm::Succ, rest)),
        "(" => {
            let (op, mut body) = rest
                .split_first()
                .ok_or_else(|| Error::Parse("empty form".into()))?;
            let term = match op.as_str() {
                "proj" => {
                    let (i, r) = parse_usize(body)?;
                    let (n, r) = parse_usize(r)?;
                    body = r;
                    RecFunTerm::Proj(i, n)
                }
                "comp" => {
                    let (f, mut r) = parse_tokens(body)?;
                    let mut gs = Vec::new();
                    while r.first().map(String::as_str) != Some(")") {
                        let (g, r2) = parse_tokens(r)?;
                        gs.push(g);
                        r = r2;
                    }
                    body = r;
                    RecFunTerm::Comp(Box::new(f), gs)
                }
                "primrec" => {
                    let (b, r) = parse_tokens(body)?;
                    let (s, r) = parse_tokens(r)?;
                    body = r;
                    RecFunTerm::PrimRec(Box::new(b), Box::new(s))
                }
                "mu" => {
                    let (f, r) = parse_tokens(body)?;
                    body = r;
                    RecFunTerm::Mu(Box::new(f))
                }
                other => return Err(Error::Parse(format!("unknown operator `{other}`"))),
            };
            rest = match body.split_first() {
                Some((close, r)) if close == ")" => r,
                _ => return Err(Error::Parse(format!("unclosed `{op}` form"))),
            };
            Ok((term, rest))
        }
        other => Err(Error::Parse(format!("unexpected token `{other}` in term"))),
    }
}

fn parse_usize<'a>(tokens: &'a [String]) -> Result<(usize, &'a [String])> {
    let (head, rest) = tokens
        .split_first()
        .ok_or_else(|| Error::Parse("expected a number".into()))?;
    let n = head
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("expected a number, got `{head}`")))?;
    Ok((n, rest))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: u64 = 10_000_000;

    fn value(term: &RecFunTerm, args: &[u64]) -> u64 {
        match eval(term, args, BUDGET).unwrap() {
            Eval::Value(v) => v,
            other => panic!("expected a value, got {other:?}"),
        }
    }

    #[test]
    fn arities_are_validated() {
        assert_eq!(addition_term().arity().unwrap(), 2);
        assert_eq!(multiplication_term().arity().unwrap(), 2);
        assert!(RecFunTerm::Proj(3, 2).arity().is_err());
        assert!(RecFunTerm::Proj(0, 2).arity().is_err());
        let bad = RecFunTerm::Comp(Box::new(RecFunTerm::Succ), vec![]);
        assert!(bad.arity().is_err());
        let unequal = RecFunTerm::Comp(
            Box::new(addition_term()),
            vec![RecFunTerm::Succ, RecFunTerm::Proj(1, 2)],
        );
        assert!(unequal.arity().is_err());
        assert!(eval(&addition_term(), &[1], BUDGET).is_err());
    }

    #[test]
    fn addition_and_multiplication_agree_with_native() {
        let add = addition_term();
        let mult = multiplication_term();
        for a in 0..12u64 {
            for b in 0..12u64 {
                assert_eq!(value(&add, &[a, b]), a + b);
                assert_eq!(value(&mult, &[a, b]), a * b);
            }
        }
    }

    #[test]
    fn minimization_finds_the_least_root() {
        // f(y, x) = x monus y^2; its least root is the ceiling square root.
        let pred = RecFunTerm::PrimRec(Box::new(RecFunTerm::Zero), Box::new(RecFunTerm::Proj(1, 2)));
        let monus_rev = RecFunTerm::PrimRec(
            Box::new(RecFunTerm::Proj(1, 1)),
            Box::new(RecFunTerm::Comp(Box::new(pred), vec![RecFunTerm::Proj(2, 3)])),
        );
        let square = RecFunTerm::Comp(
            Box::new(multiplication_term()),
            vec![RecFunTerm::Proj(1, 2), RecFunTerm::Proj(1, 2)],
        );
        let f = RecFunTerm::Comp(Box::new(monus_rev), vec![square, RecFunTerm::Proj(2, 2)]);
        let isqrt = RecFunTerm::Mu(Box::new(f));
        for x in 0..60u64 {
            let oracle = (0u64..).find(|y| y * y >= x).unwrap();
            assert_eq!(value(&isqrt, &[x]), oracle, "at x={x}");
        }
    }

    #[test]
    fn hopeless_search_exhausts_its_budget() {
        let never = RecFunTerm::Mu(Box::new(RecFunTerm::Comp(
            Box::new(RecFunTerm::Succ),
            vec![constant_zero_unary()],
        )));
        assert_eq!(never.arity().unwrap(), 0);
        assert_eq!(eval(&never, &[], 10_000).unwrap(), Eval::OutOfBudget);
        let wrapped = wrap_term("never", &never, 10_000).unwrap();
        assert_eq!(wrapped.apply(&[]).unwrap(), None);
    }

    #[test]
    fn wrapped_terms_are_structural_maps() {
        let s = recursive_functions(
            BUDGET,
            &[("add", addition_term()), ("mult", multiplication_term())],
        )
        .unwrap();
        assert_eq!(s.maximal_arity(), 2);
        let out = s.map("add").unwrap().apply(&[Value::Nat(3), Value::Nat(4)]).unwrap();
        assert_eq!(out, Some(vec![Value::Nat(7)]));
    }

    #[test]
    fn sexpr_round_trips() {
        for term in [
            RecFunTerm::Zero,
            addition_term(),
            multiplication_term(),
            RecFunTerm::Mu(Box::new(constant_one_unary())),
            RecFunTerm::Proj(2, 5),
        ] {
            let text = render_term(&term);
            assert_eq!(parse_term(&text).unwrap(), term, "through `{text}`");
        }
        let parsed = parse_term("(primrec (proj 1 1) (comp succ (proj 2 3)))").unwrap();
        assert_eq!(parsed, addition_term());
        assert!(parse_term("(comp succ").is_err());
        assert!(parse_term("(frob 1)").is_err());
        assert!(parse_term("zero zero").is_err());
    }
}
