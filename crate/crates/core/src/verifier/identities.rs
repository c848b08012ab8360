use std::collections::HashMap;
use std::sync::Arc;

use crate::exactla::GaussianRational;
use crate::graded::{Discrepancy, GradedOperator, Layout};

use super::{CheckId, KahlerPackage, PackageBlock, Verdict, VerifyError, Witness};

type Failure = (usize, Discrepancy);

/// One named identity and the first block where it failed, if any.
struct Tracker {
    check: CheckId,
    name: &'static str,
    failure: Option<Failure>,
}

impl Tracker {
    fn new(check: CheckId, name: &'static str) -> Self {
        Tracker { check, name, failure: None }
    }

    fn verdict(self) -> Verdict {
        match self.failure {
            None => Verdict::pass(self.check, self.name),
            Some((block, discrepancy)) => {
                Verdict::fail(self.check, self.name, Witness::Identity { block, discrepancy })
            }
        }
    }
}

const LAPLACIAN_NAMES: [&str; 13] = [
    "∂∂ = 0",
    "∂̄∂̄ = 0",
    "∂∂̄ + ∂̄∂ = 0",
    "[L,∂] = 0",
    "[L,∂̄] = 0",
    "Δ = 2Δ_∂",
    "Δ = 2Δ_∂̄",
    "[Δ,L] = 0",
    "[Δ,Λ] = 0",
    "[Δ,π^pq] = 0",
    "conj² = 1",
    "conj∂̄ = ∂conj",
    "conj L = L conj",
];
const SL2_NAMES: [&str; 3] = ["[Λ,L] = H", "[H,L] = -2L", "[H,Λ] = 2Λ"];
const NAKANO_NAMES: [&str; 2] = ["[Λ,∂̄] = -i∂*", "[Λ,∂] = i∂̄*"];

/// `Λ` and the sl2 results depend only on the layout, metric and `L`, which
/// torus blocks share; they are computed once per distinct triple.
#[derive(Default)]
struct LefschetzCache {
    entries: HashMap<(usize, usize, usize), (Arc<GradedOperator>, [Option<Discrepancy>; 3])>,
}

impl LefschetzCache {
    fn get(&mut self, b: &PackageBlock) -> Result<&(Arc<GradedOperator>, [Option<Discrepancy>; 3]), VerifyError> {
        let key = (
            Arc::as_ptr(&b.layout) as usize,
            Arc::as_ptr(&b.gram) as usize,
            Arc::as_ptr(&b.lefschetz) as usize,
        );
        if !self.entries.contains_key(&key) {
            let layout = &*b.layout;
            let l = &*b.lefschetz;
            let lambda = l.adjoint(&b.gram)?;
            let h = weight_operator(layout);
            let two = GaussianRational::from_integer(2);
            let sl2 = [
                lambda.commutator(l).first_discrepancy(&h, layout),
                h.commutator(l).first_discrepancy(&l.scale(&-two.clone()), layout),
                h.commutator(&lambda).first_discrepancy(&lambda.scale(&two), layout),
            ];
            self.entries.insert(key, (Arc::new(lambda), sl2));
        }
        Ok(&self.entries[&key])
    }
}

pub(crate) fn weight_operator(layout: &Layout) -> GradedOperator {
    let n = layout.n() as i64;
    GradedOperator::degree_weighted(layout, |k| n - k as i64)
}

/// Evaluates every named identity on every block. A verdict fails at the
/// first block (in order) where its two sides differ.
pub fn validate_package(pkg: &KahlerPackage) -> Result<Vec<Verdict>, VerifyError> {
    let mut lap: Vec<Tracker> = LAPLACIAN_NAMES.iter().map(|n| Tracker::new(CheckId::KLaplacians, n)).collect();
    let mut sl2: Vec<Tracker> = SL2_NAMES.iter().map(|n| Tracker::new(CheckId::KSl2, n)).collect();
    let mut nak: Vec<Tracker> = NAKANO_NAMES.iter().map(|n| Tracker::new(CheckId::KNakano, n)).collect();
    let mut cache = LefschetzCache::default();
    let i = GaussianRational::i();
    let two = GaussianRational::from_integer(2);
    let zero = GradedOperator::zero();

    for (bi, b) in pkg.blocks().iter().enumerate() {
        let layout = &*b.layout;
        let (lambda, sl2_result) = cache.get(b)?.clone();
        for (t, r) in sl2.iter_mut().zip(sl2_result) {
            if t.failure.is_none() {
                t.failure = r.map(|d| (bi, d));
            }
        }

        let p = &b.partial;
        let q = &b.dbar;
        let l = &*b.lefschetz;
        let p_star = p.adjoint(&b.gram)?;
        let q_star = q.adjoint(&b.gram)?;
        let d = p.add(q);
        let d_star = p_star.add(&q_star);
        let delta = d.anticommutator(&d_star);
        let partner = &pkg.blocks()[b.conj_partner];
        let m = &*b.conj;

        let record = |t: &mut Tracker, eval: &dyn Fn() -> Option<Discrepancy>| {
            if t.failure.is_none() {
                if let Some(disc) = eval() {
                    t.failure = Some((bi, disc));
                }
            }
        };
        let same = |a: GradedOperator, b: GradedOperator| a.first_discrepancy(&b, layout);
        let across = |a: GradedOperator, c: GradedOperator| a.first_discrepancy_between(&c, layout, &partner.layout);

        record(&mut lap[0], &|| same(p.compose(p), zero.clone()));
        record(&mut lap[1], &|| same(q.compose(q), zero.clone()));
        record(&mut lap[2], &|| same(p.anticommutator(q), zero.clone()));
        record(&mut lap[3], &|| same(l.commutator(p), zero.clone()));
        record(&mut lap[4], &|| same(l.commutator(q), zero.clone()));
        record(&mut lap[5], &|| same(delta.clone(), p.anticommutator(&p_star).scale(&two)));
        record(&mut lap[6], &|| same(delta.clone(), q.anticommutator(&q_star).scale(&two)));
        record(&mut lap[7], &|| same(delta.commutator(l), zero.clone()));
        record(&mut lap[8], &|| same(delta.commutator(&lambda), zero.clone()));
        record(&mut lap[9], &|| {
            let mut diagonal = GradedOperator::zero();
            for (s, t, blk) in delta.blocks() {
                if s == t {
                    diagonal.insert(s, t, blk.clone());
                }
            }
            same(delta.clone(), diagonal)
        });
        // conj(conj(x)) = M_partner · conj(M) · x
        record(&mut lap[10], &|| same(partner.conj.compose(&m.conj()), GradedOperator::identity(layout)));
        record(&mut lap[11], &|| across(m.compose(&q.conj()), partner.partial.compose(m)));
        record(&mut lap[12], &|| across(m.compose(&l.conj()), partner.lefschetz.compose(m)));

        record(&mut nak[0], &|| same(lambda.commutator(q), p_star.scale(&-i.clone())));
        record(&mut nak[1], &|| same(lambda.commutator(p), q_star.scale(&i)));
    }

    Ok(sl2.into_iter().chain(nak).chain(lap).map(Tracker::verdict).collect())
}
