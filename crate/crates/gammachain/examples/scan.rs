use gammachain::model::ModelParams;
use gammachain::scaling::{self, ScalingTarget};

fn main() {
    let base = ModelParams::reference(0.5, 1.0, 2000).unwrap();
    let targets = [
        ScalingTarget::EnergyCurvature,
        ScalingTarget::CorrelationDerivative,
        ScalingTarget::SqcSusceptibility { r: 1 },
        ScalingTarget::SqcSusceptibility { r: 2 },
        ScalingTarget::SqcSusceptibility { r: 3 },
    ];
    let s1: Vec<usize> = (1..=10).map(|i| 200 * i).collect();
    let s2: Vec<usize> = (1..=5).map(|i| 200 * i).collect();
    let s3: Vec<usize> = vec![1000, 1500, 2000, 2500, 3000, 4000];

    for t in targets {
        for (tag, sizes) in [("200..2000", &s1), ("200..1000", &s2), ("1000..4000", &s3)] {
            let peaks = scaling::peaks_over_sizes(&base, t, sizes, (0.85, 1.1), 400).unwrap();
            let fit = scaling::log_fit_n(
                &peaks.iter().map(|(n, _, v)| (*n, *v)).collect::<Vec<_>>(),
            )
            .unwrap();
            println!(
                "{:<28} a[{tag}] = {:+.5} +- {:.5}",
                t.label(),
                fit.slope,
                fit.stderr
            );
        }
        for window in [(1e-4, 1e-2), (1e-5, 1e-3), (1e-6, 1e-4)] {
            for side in [scaling::Side::Above, scaling::Side::Below] {
                let pts =
                    scaling::distance_scan_thermo_side(&base, t, window, 16, side).unwrap();
                let fit = scaling::log_fit_distance(&pts).unwrap();
                println!(
                    "{:<28} b[thermo {:.0e}..{:.0e} {:?}] = {:+.5} +- {:.5}",
                    t.label(),
                    window.0,
                    window.1,
                    side,
                    fit.slope,
                    fit.stderr
                );
            }
        }
        println!();
    }
}

#[allow(dead_code)]
fn below_side() {}
