use gammachain::model::{self, ModelParams, SweepVariable};

fn main() {
    // one-sided curvature estimators around the alpha transition at h=0.5
    let alpha_c = -0.25000000000000006f64;
    for n in [1000usize, 2000, 4000] {
        let p = ModelParams::reference(0.0, 0.5, n).unwrap();
        let curv = |alpha: f64, step: f64| -> f64 {
            -model::energy_second_derivative(&p.with_alpha(alpha), SweepVariable::Alpha, step)
                .unwrap()
        };
        // single stencil at +-1e-3
        let jump_single =
            (curv(alpha_c + 1e-3, 2.5e-4) - curv(alpha_c - 1e-3, 2.5e-4)).abs();
        // averaged over one-sided windows anchored at 1e-3
        let avg = |side: f64, count: usize, spacing: f64| -> f64 {
            (0..count)
                .map(|i| curv(alpha_c + side * (1e-3 + i as f64 * spacing), 2.5e-4))
                .sum::<f64>()
                / count as f64
        };
        for (count, spacing) in [(5usize, 5e-4), (21, 2e-4), (41, 1e-4), (81, 5e-5)] {
            let j = (avg(1.0, count, spacing) - avg(-1.0, count, spacing)).abs();
            println!("N={n}: avg({count},{spacing:.0e}) jump = {j:.6}");
        }
        println!("N={n}: single jump = {jump_single:.6}");
    }
}
