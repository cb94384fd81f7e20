use std::f64::consts::PI;
use std::sync::Arc;

use holoww::normal_form::{
    classical_nf, classical_sources, classify_cubic, cubic_sources_on, flow_residual, flow_residual_analytic, para_nf,
    scaling_fields, term_table, term_table_dump, ts_relation, CubicClass, CubicGroup, TermInputs,
};
use holoww::paradiff_calculus::{balanced, para, ParaConfig};
use holoww::spectral_core::{random_field, sobolev_norm, Field, Grid, GridSpec, HoloField, C64};
use holoww::waterwave_dynamics::{evolve, propagate_linear, PacketData, Scheme, StepperConfig, WaveState};
use holoww::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid() -> Arc<Grid> {
    Grid::new(GridSpec::new(100.0 * PI, 512, 2.0 / 3.0).unwrap())
}

fn packet(g: &Arc<Grid>, eps: f64) -> WaveState {
    PacketData::new(eps, 0.25, 0.05).state(g, 0.0).unwrap()
}

fn pair(a: &Field, b: &Field) -> f64 {
    sobolev_norm(a, b, 0.25, true).unwrap()
}

fn ratio(f: impl Fn(f64) -> f64, eps: f64) -> f64 {
    f(eps) / f(eps / 2.0)
}

fn stepper() -> StepperConfig {
    StepperConfig::new(0.05, Scheme::Rk4IntegratingFactor)
}

#[test]
fn zero_state_has_zero_normal_form() {
    let g = grid();
    let s = WaveState::zero(&g, 1.0);
    let (w, q) = classical_nf(&s);
    assert_eq!(w.max_coef() + q.max_coef(), 0.0);
    let cfg = ParaConfig::default();
    let nf = para_nf(&s, &cfg);
    for f in [&nf.w, &nf.q, &nf.f2, &nf.g3, &nf.k3, &nf.resid_g, &nf.resid_k] {
        assert_eq!(f.max_coef(), 0.0);
    }
    let sf = scaling_fields(&s, &nf, &cfg);
    assert_eq!(sf.frak_w.max_coef() + sf.frak_r.max_coef(), 0.0);
}

#[test]
fn classical_correction_is_quadratic() {
    let g = grid();
    let r = ratio(
        |eps| {
            let s = packet(&g, eps);
            let (w, _) = classical_nf(&s);
            (w.field() - s.w.field()).norm_l2()
        },
        4e-3,
    );
    assert!((3.5..=4.5).contains(&r), "{r}");
}

#[test]
fn classical_sources_are_cubic() {
    let g = grid();
    let r = ratio(
        |eps| {
            let (a, b) = classical_sources(&packet(&g, eps));
            pair(a.field(), b.field())
        },
        4e-3,
    );
    assert!((7.0..=9.0).contains(&r), "{r}");
}

#[test]
fn para_variables_satisfy_their_definition() {
    let g = grid();
    let cfg = ParaConfig::default();
    let s = packet(&g, 1e-2);
    let nf = para_nf(&s, &cfg);
    let w = s.w.field();
    let wa = w.dx();
    let rw = w.two_re();
    let r = s.aux.r.field();
    let dw = nf.w.field() - w + para(&wa, w, &cfg).unwrap() + balanced(&wa, &rw, &cfg).unwrap();
    let dq = nf.q.field() - s.q.field() + para(r, w, &cfg).unwrap() + balanced(r, &rw, &cfg).unwrap();
    assert!(dw.norm_l2() < 1e-13 * w.norm_l2(), "{:e}", dw.norm_l2());
    assert!(dq.norm_l2() < 1e-13 * s.q.norm_l2(), "{:e}", dq.norm_l2());
}

#[test]
fn para_variables_differ_at_second_order() {
    let g = grid();
    let cfg = ParaConfig::default();
    let r = ratio(
        |eps| {
            let s = packet(&g, eps);
            let nf = para_nf(&s, &cfg);
            let dw = nf.w.dx() - s.aux.bw.field();
            let dr = nf.q.dx() - s.aux.r.field();
            let x = |f: &Field| f.norm_sup() + holoww::spectral_core::frac_derivative(f, 0.5).unwrap().norm_sup();
            x(&dw) + x(&dr)
        },
        4e-3,
    );
    assert!((3.5..=4.5).contains(&r), "{r}");
}

#[test]
fn cubic_sources_are_trilinear() {
    let g = grid();
    let cfg = ParaConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let jmax = g.spec().keep() / 4;
    let w = random_field(&g, &mut rng, jmax, true).scale(1e-2);
    let q = random_field(&g, &mut rng, jmax, true).scale(1e-2);
    let lam = 1.7;
    let one = cubic_sources_on(&TermInputs::new(&w, &q), &cfg);
    let scaled = cubic_sources_on(&TermInputs::new(&w.scale(lam), &q.scale(lam)), &cfg);
    for (t, (a, b)) in term_table().iter().zip(one.terms.iter().zip(&scaled.terms)) {
        let err = (b.field() - &a.scale(lam.powi(3))).norm_l2();
        assert!(err <= 1e-12 * b.norm_l2().max(1e-300), "{}: {err:e}", t.id);
    }
    let zero = cubic_sources_on(&TermInputs::new(&Field::zeros(&g), &Field::zeros(&g)), &cfg);
    assert_eq!(zero.g().max_coef() + zero.k().max_coef(), 0.0);
}

#[test]
fn groups_sum_to_the_sources() {
    let g = grid();
    let cfg = ParaConfig::default();
    let s = packet(&g, 1e-2);
    let nf = para_nf(&s, &cfg);
    let c = cubic_sources_on(&TermInputs::new(nf.w.field(), nf.q.field()), &cfg);
    let [g1, g2, g3, k1, k2, k3] = c.groups();
    let gs = g1.field() + g2.field() + g3.field();
    let ks = k1.field() + k2.field() + k3.field();
    assert!((&gs - nf.g3.field()).norm_l2() <= 1e-14 * nf.g3.norm_l2());
    assert!((&ks - nf.k3.field()).norm_l2() <= 1e-14 * nf.k3.norm_l2());
    let by_class = [CubicClass::Resonant, CubicClass::Nonresonant, CubicClass::Null]
        .iter()
        .fold(Field::zeros(&g), |acc, &k| acc + c.class(true, k).into_field());
    assert!((&by_class - nf.g3.field()).norm_l2() <= 1e-14 * nf.g3.norm_l2());
    assert!(c.group(CubicGroup::K1).is_finite());
}

#[test]
fn cubic_sources_capture_the_flow_to_quartic_order() {
    let g = grid();
    let cfg = ParaConfig::default();
    let r = ratio(
        |eps| {
            let nf = para_nf(&packet(&g, eps), &cfg);
            pair(&(nf.resid_g.field() - nf.g3.field()), &(nf.resid_k.field() - nf.k3.field()))
        },
        4e-3,
    );
    assert!((13.0..=19.0).contains(&r), "{r}");
}

#[test]
fn flow_residual_is_cubic_on_the_full_flow() {
    let g = grid();
    let cfg = ParaConfig::default();
    let r = ratio(
        |eps| {
            let nf = para_nf(&packet(&g, eps), &cfg);
            pair(nf.resid_g.field(), nf.resid_k.field())
        },
        4e-3,
    );
    assert!((7.0..=9.0).contains(&r), "{r}");
}

#[test]
fn flow_residual_is_quadratic_on_the_linear_flow() {
    let g = grid();
    let cfg = ParaConfig::default();
    let h = 0.05;
    let size = |eps: f64| {
        let s = packet(&g, eps);
        let snap = |t: f64| {
            let (w, q) = propagate_linear(s.w.field(), s.q.field(), t);
            WaveState::from_fields(1.0 + t, &w, &q).unwrap()
        };
        let (a, b, c) = (snap(-h), snap(0.0), snap(h));
        let (rg, rk) = flow_residual([&a, &b, &c], &cfg).unwrap();
        pair(rg.field(), rk.field())
    };
    let r = size(4e-3) / size(2e-3);
    assert!((3.5..=4.5).contains(&r), "{r}");
}

#[test]
fn centered_and_analytic_residuals_agree_at_second_order() {
    let g = grid();
    let cfg = ParaConfig::default();
    let mid = evolve(&packet(&g, 1e-2), &stepper(), 2.0).unwrap();
    let (ga, ka) = flow_residual_analytic(&mid, &cfg);
    let err = |h: f64| {
        let sub = stepper().with_dt(h / 4.0);
        let a = evolve(&mid, &sub, mid.t - h).unwrap();
        let c = evolve(&mid, &sub, mid.t + h).unwrap();
        let (gc, kc) = flow_residual([&a, &mid, &c], &cfg).unwrap();
        pair(&(gc.field() - ga.field()), &(kc.field() - ka.field()))
    };
    let order = (err(0.2) / err(0.1)).log2();
    assert!((1.8..=2.2).contains(&order), "{order}");
}

#[test]
fn uneven_snapshots_are_rejected() {
    let g = grid();
    let s = packet(&g, 1e-3);
    let mut b = s.clone();
    b.t = 0.1;
    let mut c = s.clone();
    c.t = 0.3;
    let err = flow_residual([&s, &b, &c], &ParaConfig::default()).unwrap_err();
    assert!(matches!(err, Error::InconsistentTimes(_)));
}

#[test]
fn scaling_relation_holds_to_discretization_error() {
    let g = grid();
    let cfg = ParaConfig::default();
    let mid = evolve(&packet(&g, 1e-2), &stepper(), 3.0).unwrap();
    let triple = |h: f64| {
        let sub = stepper().with_dt(h / 4.0);
        (evolve(&mid, &sub, mid.t - h).unwrap(), evolve(&mid, &sub, mid.t + h).unwrap())
    };
    let (a1, c1) = triple(0.2);
    let (a2, c2) = triple(0.1);
    let ts = ts_relation([&a1, &mid, &c1], [&a2, &mid, &c2], &cfg).unwrap();
    assert!(ts.ratio() < 10.0, "{} / {}", ts.residual, ts.disc_error);
}

#[test]
fn self_similar_profile_is_annihilated_by_scaling() {
    // f(t, a) = h(a / t^2) has t f_t + 2 a f_a = 0
    let g = grid();
    let t = 6.0;
    let h = |x: f64| (-(x * 2.0).powi(2)).exp();
    let dh = |x: f64| -8.0 * x * h(x);
    let f = Field::from_fn(&g, |a| C64::new(h(a / (t * t)), 0.0));
    let f_t = Field::from_fn(&g, |a| C64::new(-2.0 * a / (t * t * t) * dh(a / (t * t)), 0.0));
    let s = f_t.scale(t) + f.dx().mul_alpha().scale(2.0);
    assert!(s.norm_sup() < 1e-10, "{:e}", s.norm_sup());
}

#[test]
fn classification_follows_the_term_table() {
    assert_eq!(classify_cubic("G2.7").unwrap(), CubicClass::Resonant);
    assert_eq!(classify_cubic("K2.1").unwrap(), CubicClass::Nonresonant);
    for id in ["G2.1", "G2.2", "G2.3", "G3.4", "K2.3"] {
        assert_eq!(classify_cubic(id).unwrap(), CubicClass::Null, "{id}");
    }
    assert!(matches!(classify_cubic("G9.9"), Err(Error::UnknownTerm(_))));
    assert!(term_table().iter().filter(|t| !t.group.is_g()).all(|t| t.class != CubicClass::Resonant));
    let dump = term_table_dump();
    assert_eq!(dump.lines().count(), term_table().len() + 1);
    assert!(dump.contains("Pi(conj Qa, Wa^2)"));
}

#[test]
fn holomorphic_outputs() {
    let g = grid();
    let nf = para_nf(&packet(&g, 1e-2), &ParaConfig::default());
    let all: [&HoloField; 6] = [&nf.w, &nf.q, &nf.g3, &nf.k3, &nf.resid_g, &nf.resid_k];
    assert!(all.iter().all(|f| f.nonneg_leakage() == 0.0));
}
