use std::path::PathBuf;

use diracwire_cli::config::{
    ChannelConfig, GeometryConfig, Mu, OutputConfig, OutputFormat, ProblemConfig, ProblemKind, RunConfig,
    SolverConfig,
};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, any::<f64>().prop_filter("finite", |x| x.is_finite())]
}

fn config() -> impl Strategy<Value = RunConfig> {
    let problem = (
        prop_oneof![Just(ProblemKind::JrPlus), Just(ProblemKind::JrMinus), Just(ProblemKind::JrD)],
        proptest::option::of(finite()),
        proptest::option::of(finite()),
        proptest::option::of(finite()),
    )
        .prop_map(|(class, i, e, b)| ProblemConfig {
            class,
            interior_mass_eV: i,
            exterior_mass_eV: e,
            dispersion_eV_A2: b,
        });
    let geometry = (finite(), finite()).prop_map(|(a, v)| GeometryConfig {
        a_angstrom: a,
        vF_m_per_s: v,
    });
    let channel = ((-20i32..20).prop_map(|n| 2 * n + 1), finite()).prop_map(|(m, kz)| ChannelConfig {
        mu: Mu(m),
        kz_invA: kz,
    });
    let solver = (1usize..100_000, finite(), 0usize..50, proptest::option::of((finite(), finite())))
        .prop_map(|(n, tol, r, w)| SolverConfig {
            scan_points: n,
            energy_tol_eV: tol,
            threshold_refinement: r,
            window_eV: w.map(|(a, b)| [a, b]),
        });
    let output = ("[a-z/_.]{1,12}", proptest::collection::vec(prop_oneof![Just(OutputFormat::Csv), Just(OutputFormat::Json)], 0..3))
        .prop_map(|(dir, formats)| OutputConfig {
            dir: PathBuf::from(dir),
            formats,
        });
    (problem, geometry, channel, solver, output).prop_map(|(problem, geometry, channel, solver, output)| RunConfig {
        problem,
        geometry,
        channel,
        solver,
        output,
    })
}

proptest! {
    #[test]
    fn toml_round_trip_is_lossless(cfg in config()) {
        let back = RunConfig::from_toml(&cfg.to_toml()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn json_round_trip_is_lossless(cfg in config()) {
        let back = RunConfig::from_json(&cfg.to_json()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn mu_text_round_trip(n in -1000i32..1000) {
        let mu = Mu(2 * n + 1);
        prop_assert_eq!(mu.to_string().parse::<Mu>().unwrap(), mu);
    }
}

#[test]
fn default_config_round_trips() {
    let cfg = RunConfig::default();
    assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
}
