//! Postfix form of identities for repeated evaluation over flat tables.

use crate::identity::Identity;
use crate::term::{Term, Var};

/// Marks a cell that has not been assigned yet.
pub(crate) const UNSET: u8 = u8::MAX;

#[derive(Clone, Copy, Debug)]
enum Op {
    Var(u8),
    Zero,
    Arrow,
}

#[derive(Clone, Debug)]
pub(crate) struct CompiledIdentity {
    lhs: Vec<Op>,
    rhs: Vec<Op>,
    vars: Vec<Var>,
    stack: usize,
}

fn compile(t: &Term, vars: &[Var], out: &mut Vec<Op>) {
    match t {
        Term::Var(v) => out.push(Op::Var(vars.iter().position(|w| w == v).unwrap() as u8)),
        Term::Zero => out.push(Op::Zero),
        Term::Arrow(l, r) => {
            compile(l, vars, out);
            compile(r, vars, out);
            out.push(Op::Arrow);
        }
    }
}

impl CompiledIdentity {
    pub fn new(id: &Identity) -> Self {
        let vars = id.variables();
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        compile(&id.lhs, &vars, &mut lhs);
        compile(&id.rhs, &vars, &mut rhs);
        let stack = stack_need(&lhs).max(stack_need(&rhs));
        CompiledIdentity { lhs, rhs, vars, stack }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    /// Evaluates both sides. `Err(cell)` names the first unassigned cell hit.
    #[inline]
    pub fn eval(&self, table: &[u8], n: usize, env: &[u8]) -> Result<(u8, u8), usize> {
        let mut small = [0u8; 64];
        let mut heap;
        let stack: &mut [u8] = if self.stack <= small.len() {
            &mut small
        } else {
            heap = vec![0u8; self.stack];
            &mut heap
        };
        let l = eval_ops(&self.lhs, table, n, env, stack)?;
        Ok((l, eval_ops(&self.rhs, table, n, env, stack)?))
    }
}

#[inline]
fn eval_ops(ops: &[Op], table: &[u8], n: usize, env: &[u8], stack: &mut [u8]) -> Result<u8, usize> {
    let mut sp = 0;
    for op in ops {
        match *op {
            Op::Var(i) => {
                stack[sp] = env[i as usize];
                sp += 1;
            }
            Op::Zero => {
                stack[sp] = 0;
                sp += 1;
            }
            Op::Arrow => {
                let b = stack[sp - 1] as usize;
                let a = stack[sp - 2] as usize;
                let cell = a * n + b;
                let v = table[cell];
                if v == UNSET {
                    return Err(cell);
                }
                sp -= 1;
                stack[sp - 1] = v;
            }
        }
    }
    Ok(stack[0])
}

fn stack_need(ops: &[Op]) -> usize {
    let (mut sp, mut max) = (0usize, 0usize);
    for op in ops {
        match op {
            Op::Arrow => sp -= 1,
            _ => sp += 1,
        }
        max = max.max(sp);
    }
    max
}

/// Calls `f` for every assignment of `k` variables over `n` elements in
/// lexicographic order, first variable most significant. Stops early when
/// `f` returns `false`.
pub(crate) fn for_each_assignment(n: usize, k: usize, mut f: impl FnMut(&[u8]) -> bool) {
    let mut env = vec![0u8; k];
    loop {
        if !f(&env) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            env[i] += 1;
            if (env[i] as usize) < n {
                break;
            }
            env[i] = 0;
        }
    }
}
