use crate::model::{BayesianNetwork, VarId};

const RESCALE_HIGH: f64 = 1e100;
const RESCALE_LOW: f64 = 1e-100;

/// Nonnegative table over a set of variables.
///
/// `scope` is kept sorted by variable id and `values` is row-major over it
/// (last scope variable fastest). The represented value of entry `i` is
/// `values[i] * exp(log_scale)`; the scale absorbs renormalization so
/// large products never overflow.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    scope: Vec<VarId>,
    cards: Vec<usize>,
    values: Vec<f64>,
    log_scale: f64,
}

impl Factor {
    /// Scalar factor with value 1.
    pub fn unit() -> Self {
        Self {
            scope: Vec::new(),
            cards: Vec::new(),
            values: vec![1.0],
            log_scale: 0.0,
        }
    }

    /// Builds a factor from a scope (any order) and values laid out over
    /// that scope. The result is re-laid out over the sorted scope.
    pub fn from_table(scope: &[VarId], cards: &[usize], values: Vec<f64>) -> Self {
        assert_eq!(scope.len(), cards.len());
        assert_eq!(values.len(), cards.iter().product::<usize>());
        let mut perm: Vec<usize> = (0..scope.len()).collect();
        perm.sort_by_key(|&i| scope[i]);
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return Self {
                scope: scope.to_vec(),
                cards: cards.to_vec(),
                values,
                log_scale: 0.0,
            };
        }
        let src_strides = strides(cards);
        let sorted_scope: Vec<VarId> = perm.iter().map(|&i| scope[i]).collect();
        let sorted_cards: Vec<usize> = perm.iter().map(|&i| cards[i]).collect();
        // stride into the source table for each sorted position
        let step: Vec<usize> = perm.iter().map(|&i| src_strides[i]).collect();
        let mut out = Vec::with_capacity(values.len());
        let mut counter = vec![0usize; scope.len()];
        let mut src = 0usize;
        for _ in 0..values.len() {
            out.push(values[src]);
            advance(&mut counter, &sorted_cards, &mut src, &step);
        }
        Self {
            scope: sorted_scope,
            cards: sorted_cards,
            values: out,
            log_scale: 0.0,
        }
    }

    /// `p(child | parents)` as a factor over `parents ∪ {child}`.
    pub fn from_cpt(net: &BayesianNetwork, child: VarId) -> Self {
        let cpt = net.cpt(child);
        let mut scope = cpt.parents.clone();
        scope.push(child);
        let cards: Vec<usize> = scope.iter().map(|&v| net.cardinality(v)).collect();
        Self::from_table(&scope, &cards, cpt.table.clone())
    }

    pub fn scope(&self) -> &[VarId] {
        &self.scope
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cards
    }

    /// Raw table entries; multiply by `exp(log_scale())` for true values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn contains(&self, var: VarId) -> bool {
        self.scope.binary_search(&var).is_ok()
    }

    /// True (unscaled) values.
    pub fn linear_values(&self) -> Vec<f64> {
        let s = self.log_scale.exp();
        self.values.iter().map(|v| v * s).collect()
    }

    /// Natural log of the true value at a flat index.
    pub fn ln_value(&self, index: usize) -> f64 {
        self.values[index].ln() + self.log_scale
    }

    /// Flat index of a full configuration of the scope, given as states in
    /// scope order.
    pub fn index_of(&self, states: &[usize]) -> usize {
        states
            .iter()
            .zip(&self.cards)
            .fold(0, |acc, (&s, &c)| acc * c + s)
    }

    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Sum of true values in log domain.
    pub fn ln_total(&self) -> f64 {
        self.values.iter().sum::<f64>().ln() + self.log_scale
    }

    /// Entries normalized to sum to one, or `None` for an all-zero factor.
    pub fn normalized(&self) -> Option<Vec<f64>> {
        let total: f64 = self.values.iter().sum();
        if total > 0.0 {
            Some(self.values.iter().map(|v| v / total).collect())
        } else {
            None
        }
    }

    /// Fixes `var` to `state` and drops it from the scope.
    pub fn restrict(&self, var: VarId, state: usize) -> Factor {
        let Ok(pos) = self.scope.binary_search(&var) else {
            return self.clone();
        };
        let st = strides(&self.cards);
        let mut scope = self.scope.clone();
        let mut cards = self.cards.clone();
        scope.remove(pos);
        cards.remove(pos);
        let mut step = st.clone();
        step.remove(pos);
        let len: usize = cards.iter().product();
        let mut out = Vec::with_capacity(len);
        let mut counter = vec![0usize; scope.len()];
        let mut src = state * st[pos];
        for _ in 0..len {
            out.push(self.values[src]);
            advance(&mut counter, &cards, &mut src, &step);
        }
        let mut f = Factor {
            scope,
            cards,
            values: out,
            log_scale: self.log_scale,
        };
        f.rescale();
        f
    }

    pub fn product(&self, other: &Factor) -> Factor {
        let mut scope = Vec::with_capacity(self.scope.len() + other.scope.len());
        let mut cards = Vec::with_capacity(scope.capacity());
        let (mut i, mut j) = (0, 0);
        while i < self.scope.len() || j < other.scope.len() {
            let take_left =
                j >= other.scope.len() || (i < self.scope.len() && self.scope[i] <= other.scope[j]);
            if take_left {
                if j < other.scope.len() && self.scope[i] == other.scope[j] {
                    j += 1;
                }
                scope.push(self.scope[i]);
                cards.push(self.cards[i]);
                i += 1;
            } else {
                scope.push(other.scope[j]);
                cards.push(other.cards[j]);
                j += 1;
            }
        }
        let step_a = embedded_strides(&scope, &self.scope, &self.cards);
        let step_b = embedded_strides(&scope, &other.scope, &other.cards);
        let len: usize = cards.iter().product();
        let mut out = Vec::with_capacity(len);
        let mut counter = vec![0usize; scope.len()];
        let (mut ia, mut ib) = (0usize, 0usize);
        for _ in 0..len {
            out.push(self.values[ia] * other.values[ib]);
            advance2(&mut counter, &cards, &mut ia, &step_a, &mut ib, &step_b);
        }
        let mut f = Factor {
            scope,
            cards,
            values: out,
            log_scale: self.log_scale + other.log_scale,
        };
        f.rescale();
        f
    }

    pub fn sum_out(&self, var: VarId) -> Factor {
        let Ok(pos) = self.scope.binary_search(&var) else {
            return self.clone();
        };
        let mut scope = self.scope.clone();
        let mut cards = self.cards.clone();
        scope.remove(pos);
        cards.remove(pos);
        let st = strides(&self.cards);
        let mut step = st.clone();
        step.remove(pos);
        let len: usize = cards.iter().product();
        let mut out = Vec::with_capacity(len);
        let mut counter = vec![0usize; scope.len()];
        let mut src = 0usize;
        for _ in 0..len {
            let mut acc = 0.0;
            for s in 0..self.cards[pos] {
                acc += self.values[src + s * st[pos]];
            }
            out.push(acc);
            advance(&mut counter, &cards, &mut src, &step);
        }
        let mut f = Factor {
            scope,
            cards,
            values: out,
            log_scale: self.log_scale,
        };
        f.rescale();
        f
    }

    fn rescale(&mut self) {
        let max = self.values.iter().copied().fold(0.0f64, f64::max);
        if max > RESCALE_HIGH || (max > 0.0 && max < RESCALE_LOW) {
            for v in &mut self.values {
                *v /= max;
            }
            self.log_scale += max.ln();
        }
    }
}

fn strides(cards: &[usize]) -> Vec<usize> {
    let mut st = vec![1usize; cards.len()];
    for i in (0..cards.len().saturating_sub(1)).rev() {
        st[i] = st[i + 1] * cards[i + 1];
    }
    st
}

/// Strides of `sub` (a sorted subset of the sorted `full` scope) expressed
/// per position of `full`; zero where the variable is absent.
fn embedded_strides(full: &[VarId], sub: &[VarId], sub_cards: &[usize]) -> Vec<usize> {
    let st = strides(sub_cards);
    full.iter()
        .map(|v| sub.binary_search(v).map(|k| st[k]).unwrap_or(0))
        .collect()
}

#[inline]
fn advance(counter: &mut [usize], cards: &[usize], idx: &mut usize, step: &[usize]) {
    for k in (0..counter.len()).rev() {
        counter[k] += 1;
        *idx += step[k];
        if counter[k] < cards[k] {
            return;
        }
        *idx -= step[k] * cards[k];
        counter[k] = 0;
    }
}

#[inline]
fn advance2(
    counter: &mut [usize],
    cards: &[usize],
    a: &mut usize,
    step_a: &[usize],
    b: &mut usize,
    step_b: &[usize],
) {
    for k in (0..counter.len()).rev() {
        counter[k] += 1;
        *a += step_a[k];
        *b += step_b[k];
        if counter[k] < cards[k] {
            return;
        }
        *a -= step_a[k] * cards[k];
        *b -= step_b[k] * cards[k];
        counter[k] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relayout_sorts_scope() {
        // scope (2, 0), cards (2, 3): value = 10*a2 + a0
        let vals: Vec<f64> = (0..2)
            .flat_map(|a2| (0..3).map(move |a0| (10 * a2 + a0) as f64))
            .collect();
        let f = Factor::from_table(&[2, 0], &[2, 3], vals);
        assert_eq!(f.scope(), &[0, 2]);
        for a0 in 0..3 {
            for a2 in 0..2 {
                assert_eq!(f.values()[f.index_of(&[a0, a2])], (10 * a2 + a0) as f64);
            }
        }
    }

    #[test]
    fn product_and_sum_out() {
        let a = Factor::from_table(&[0], &[2], vec![0.25, 0.75]);
        let b = Factor::from_table(&[0, 1], &[2, 2], vec![0.1, 0.9, 0.6, 0.4]);
        let ab = a.product(&b);
        assert_eq!(ab.scope(), &[0, 1]);
        let lin = ab.linear_values();
        let expect = [0.025, 0.225, 0.45, 0.3];
        for (x, y) in lin.iter().zip(expect) {
            assert!((x - y).abs() < 1e-15);
        }
        let m = ab.sum_out(0).linear_values();
        assert!((m[0] - 0.475).abs() < 1e-15);
        assert!((m[1] - 0.525).abs() < 1e-15);
    }

    #[test]
    fn restrict_drops_variable() {
        let b = Factor::from_table(&[0, 1], &[2, 3], (0..6).map(|x| x as f64).collect());
        let r = b.restrict(1, 2);
        assert_eq!(r.scope(), &[0]);
        assert_eq!(r.values(), &[2.0, 5.0]);
        let r = b.restrict(0, 1);
        assert_eq!(r.values(), &[3.0, 4.0, 5.0]);
    }

    #[test]
    fn tiny_products_rescale() {
        let mut f = Factor::unit();
        let small = Factor::from_table(&[0], &[2], vec![1e-30, 2e-30]);
        for _ in 0..20 {
            f = f.product(&small).sum_out(0).product(&Factor::unit());
        }
        // (3e-30)^20 underflows f64 without the carried scale
        let expect = 20.0 * 3e-30f64.ln();
        assert!((f.ln_value(0) - expect).abs() < 1e-9);
    }
}
