use gammachain::coherence::Axis;
use gammachain::correlations::{self, Component, ContractionSet};
use gammachain::ed;
use gammachain::model::ModelParams;

fn main() {
    // Compare all five components at r = 1..3, gapped AND spiral points,
    // to pin every orientation convention against ED.
    for (alpha, h0) in [(0.5, 0.5), (-0.5, 0.5), (0.5, 1.17)] {
        let p = ModelParams::reference(alpha, h0, 8).unwrap();
        let set = ContractionSet::new(&p, 3).unwrap();
        let ham = ed::SpinHamiltonian::build(&p).unwrap();
        let gs = ed::ground_state(&ham).unwrap();
        let fgs = gammachain::model::finite_ground_state(&p).unwrap();
        println!(
            "== alpha={alpha} h={h0}: E/N ours {:.12} ed {:.12} (sector {:?}, flip {:?}, ed gap {:.3e})",
            fgs.energy / 8.0,
            gs.energy / 8.0,
            fgs.sector,
            fgs.parity_flip,
            gs.gap,
        );
        for r in 1..=3usize {
            for comp in Component::ALL {
                let ours = correlations::two_point_from(&set, comp, r).unwrap();
                let (a, b) = match comp {
                    Component::Xx => (Axis::X, Axis::X),
                    Component::Yy => (Axis::Y, Axis::Y),
                    Component::Zz => (Axis::Z, Axis::Z),
                    Component::Xy => (Axis::X, Axis::Y),
                    Component::Yx => (Axis::Y, Axis::X),
                };
                let mut ed_v = ed::correlator(&gs, a, b, 0, r).unwrap();
                if comp == Component::Zz {
                    ed_v -= ed::site_expectation(&gs, Axis::Z, 0).unwrap()
                        * ed::site_expectation(&gs, Axis::Z, r).unwrap();
                }
                let diff = (ours - ed_v).abs();
                println!(
                    "G^{}({r}): ours {:+.12}  ed {:+.12}  diff {:.2e} {}",
                    comp.label(),
                    ours,
                    ed_v,
                    diff,
                    if diff > 1e-8 { " <-- MISMATCH" } else { "" }
                );
            }
        }
        // SQC cross-check
        for r in 1..=3usize {
            let set2 = ContractionSet::new(&p, r + 1).unwrap();
            let ours = gammachain::coherence::sqc_from(&set2, r).unwrap();
            let edv = ed::steered_coherence(&gs, 0, r).unwrap();
            println!("SQC({r}): ours {ours:.12} ed {edv:.12} diff {:.2e}", (ours - edv).abs());
        }
    }

    // SQC polarized limit at various h, N=8
    for hh in [50.0, 100.0, 500.0] {
        let p = ModelParams::reference(0.5, hh, 8).unwrap();
        let ham = ed::SpinHamiltonian::build(&p).unwrap();
        let gs = ed::ground_state(&ham).unwrap();
        let c = ed::steered_coherence(&gs, 0, 1).unwrap();
        println!("h = {hh}: ED SQC = {:.8}  (2 - SQC = {:.2e})", c, 2.0 - c);
    }

    // thermo vs finite-N mismatch debug
    let pn = ModelParams::reference(0.5, 0.8, 4096).unwrap();
    let fin = ContractionSet::new(&pn, 3).unwrap();
    match ContractionSet::thermodynamic(&pn, 3) {
        Ok(th) => {
            for rho in -3i64..=3 {
                println!(
                    "rho {rho}: fin.ba {:+.9} {:+.9}i  thermo.ba {:+.9} {:+.9}i",
                    fin.ba(rho).re,
                    fin.ba(rho).im,
                    th.ba(rho).re,
                    th.ba(rho).im
                );
                println!(
                    "        fin.aa {:+.9} {:+.9}i  thermo.aa {:+.9} {:+.9}i",
                    fin.aa(rho).re,
                    fin.aa(rho).im,
                    th.aa(rho).re,
                    th.aa(rho).im
                );
            }
        }
        Err(e) => println!("thermo failed: {e}"),
    }

    // dimer at gapped + spiral points
    for (alpha, hh, n) in [(0.5, 0.5, 512), (-0.5, 0.5, 512)] {
        let p = ModelParams::reference(alpha, hh, n).unwrap();
        let set = ContractionSet::new(&p, 12).unwrap();
        print!("dimer(alpha={alpha}, h={hh}): ");
        for r in 1..=10 {
            print!("{:+.3e} ", correlations::dimer_correlation_from(&set, r).unwrap());
        }
        println!();
    }

    // ED vector-chirality correlator vs contraction routes, N = 12 spiral
    let p = ModelParams::reference(-0.5, 0.5, 12).unwrap();
    let ham = ed::SpinHamiltonian::build(&p).unwrap();
    let gs = ed::ground_state(&ham).unwrap();
    let set = ContractionSet::new(&p, 8).unwrap();
    // kappa_i = sx_i sy_{i+1} - sy_i sx_{i+1}
    let kappa_ev = |i: usize| -> f64 {
        let xy = ed::correlator(&gs, Axis::X, Axis::Y, i, i + 1).unwrap();
        let yx = ed::correlator(&gs, Axis::Y, Axis::X, i, i + 1).unwrap();
        xy - yx
    };
    // <kappa_i kappa_j> via 4-site Pauli strings
    let kk = |i: usize, j: usize| -> f64 {
        let mut total = 0.0;
        for (a1, b1, s1) in [(Axis::X, Axis::Y, 1.0), (Axis::Y, Axis::X, -1.0)] {
            for (a2, b2, s2) in [(Axis::X, Axis::Y, 1.0), (Axis::Y, Axis::X, -1.0)] {
                // <s^{a1}_i s^{b1}_{i+1} s^{a2}_j s^{b2}_{j+1}>
                let mut v = gs.vector.clone();
                v = ed_apply(b2, j + 1, &v);
                v = ed_apply(a2, j, &v);
                v = ed_apply(b1, i + 1, &v);
                v = ed_apply(a1, i, &v);
                let amp: num_complex::Complex64 = gs
                    .vector
                    .iter()
                    .zip(&v)
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                total += s1 * s2 * amp.re;
            }
        }
        total
    };
    println!("ED dimer (N=12, spiral):");
    for r in 2..=4usize {
        let ed_d = kk(0, r) - kappa_ev(0) * kappa_ev(r);
        let b_only = correlations::dimer_correlation_from(&set, r).unwrap();
        let full = dimer_full(&set, r);
        println!("r={r}: ED {ed_d:+.10}  B-only {b_only:+.10}  full {full:+.10}");
    }

    // decay profile at N = 2000
    let p = ModelParams::reference(-0.5, 0.5, 2000).unwrap();
    let set = ContractionSet::new(&p, 14).unwrap();
    println!("N=2000 spiral decay:");
    for r in 2..=12usize {
        println!(
            "r={r}: B-only {:+.6e}  full {:+.6e}",
            correlations::dimer_correlation_from(&set, r).unwrap(),
            dimer_full(&set, r)
        );
    }
}

fn dimer_full(set: &ContractionSet, r: usize) -> f64 {
    let rr = r as i64;
    let term = |f: &dyn Fn(i64) -> num_complex::Complex64| -> num_complex::Complex64 {
        f(rr) * f(rr) - f(rr + 1) * f(rr - 1)
    };
    let bb = term(&|d| set.bb(d));
    let aa = term(&|d| set.aa(d));
    let ba = term(&|d| set.ba(d));
    let ab = term(&|d| set.ab(d));
    (bb + aa - ba - ab).re
}

fn ed_apply(axis: Axis, site: usize, v: &[num_complex::Complex64]) -> Vec<num_complex::Complex64> {
    use num_complex::Complex64 as C64;
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    let mask = 1usize << site;
    for (s, &amp) in v.iter().enumerate() {
        match axis {
            Axis::X => out[s ^ mask] += amp,
            Axis::Y => {
                let bit = (s >> site) & 1;
                let f = if bit == 0 { C64::new(0.0, 1.0) } else { C64::new(0.0, -1.0) };
                out[s ^ mask] += f * amp;
            }
            Axis::Z => {
                let bit = (s >> site) & 1;
                out[s] += if bit == 0 { amp } else { -amp };
            }
        }
    }
    out
}
