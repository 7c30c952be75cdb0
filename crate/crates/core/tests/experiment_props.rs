use std::collections::HashMap;

use rainbow_core::experiments::*;
use rainbow_core::process::ColourCount;
use rainbow_core::solver::DecisionMode;

/// Minimal reader for the emitted CSV: params, header, rows, summary.
struct Parsed {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    summary: HashMap<String, String>,
}

fn parse(csv: &str) -> Parsed {
    let mut header = None;
    let mut rows = Vec::new();
    let mut summary = HashMap::new();
    for line in csv.lines() {
        if let Some(rest) = line.strip_prefix("# summary ") {
            let (k, v) = rest.split_once('=').unwrap();
            summary.insert(k.to_string(), v.to_string());
        } else if line.starts_with('#') {
            continue;
        } else if header.is_none() {
            header = Some(line.split(',').map(String::from).collect());
        } else {
            rows.push(line.split(',').map(String::from).collect());
        }
    }
    Parsed {
        header: header.unwrap(),
        rows,
        summary,
    }
}

impl Parsed {
    fn col(&self, name: &str) -> Vec<&str> {
        let i = self.header.iter().position(|h| h == name).unwrap();
        self.rows.iter().map(|r| r[i].as_str()).collect()
    }

    fn frac(&self, name: &str, value: &str) -> f64 {
        let c = self.col(name);
        c.iter().filter(|&&x| x == value).count() as f64 / c.len() as f64
    }

    fn summary(&self, key: &str) -> &str {
        &self.summary[key]
    }
}

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

fn theorem(seed: u64, threads: usize, n: usize, trials: usize, mode: DecisionMode) -> ExperimentReport {
    run_theorem_experiment(
        &Harness::new(seed).with_threads(Some(threads)),
        &TheoremParams {
            n,
            trials,
            colours: ColourCount::Auto,
            r_mode: mode,
            budget: None,
        },
    )
    .unwrap()
}

#[test]
fn reruns_are_byte_identical_at_any_thread_count() {
    let a = theorem(11, 1, 20, 60, DecisionMode::Exact).to_csv();
    let b = theorem(11, 3, 20, 60, DecisionMode::Exact).to_csv();
    assert_eq!(a, b);
    let h1 = Harness::new(5).with_threads(Some(1));
    let h4 = Harness::new(5).with_threads(Some(4));
    let p = PoissonParams {
        n: 200,
        c: 0.5,
        trials: 100,
        colours: ColourCount::Auto,
    };
    assert_eq!(
        run_poisson_experiment(&h1, &p).unwrap().to_csv(),
        run_poisson_experiment(&h4, &p).unwrap().to_csv()
    );
    assert!(a.starts_with("# schema=1\n"));
}

#[test]
fn theorem_summary_matches_rows() {
    let rep = theorem(21, 2, 30, 200, DecisionMode::Exact);
    let p = parse(&rep.to_csv());
    assert_eq!(p.rows.len(), 200);
    assert_eq!(p.summary("p_a_eq_z"), f6(p.frac("a_eq_z", "1")));
    let r = p.col("r_at_z");
    let decided: Vec<&&str> = r.iter().filter(|&&x| x != "NA").collect();
    let yes = decided.iter().filter(|&&&x| x == "1").count() as f64 / decided.len() as f64;
    assert_eq!(p.summary("p_r_at_z"), f6(yes));
    assert_eq!(p.summary("heuristic_success_rate"), f6(p.frac("heuristic_at_z", "1")));
    // a_eq_z and r_at_z agree with the listed hitting times
    let (mz, ma, mr) = (p.col("m_Z"), p.col("m_A"), p.col("m_R"));
    for (i, row_r) in r.iter().enumerate() {
        assert_eq!(p.col("a_eq_z")[i] == "1", mz[i] == ma[i]);
        if *row_r != "NA" {
            assert_eq!(*row_r == "1", mz[i] == mr[i]);
        }
    }
}

#[test]
fn poisson_summary_matches_rows() {
    let rep = run_poisson_experiment(
        &Harness::new(8),
        &PoissonParams {
            n: 300,
            c: -0.5,
            trials: 300,
            colours: ColourCount::Auto,
        },
    )
    .unwrap();
    let p = parse(&rep.to_csv());
    let zeros: Vec<usize> = p.col("zero_in").iter().map(|z| z.parse().unwrap()).collect();
    let pz = zeros.iter().filter(|&&z| z <= 1).count() as f64 / zeros.len() as f64;
    assert_eq!(p.summary("p_z"), f6(pz));
    assert_eq!(p.summary("p_z"), f6(p.frac("z_holds", "1")));
    let lambda = 0.5f64.exp();
    assert_eq!(p.summary("p_z_limit"), f6((1.0 + lambda) * (-lambda).exp()));
    // TV distance recomputed from the histogram
    let kmax = *zeros.iter().max().unwrap();
    let mut pmf = vec![(-lambda).exp()];
    for k in 1..=kmax {
        let prev = pmf[k - 1];
        pmf.push(prev * lambda / k as f64);
    }
    let t = zeros.len() as f64;
    let mut tv = 1.0 - pmf.iter().sum::<f64>();
    for (k, q) in pmf.iter().enumerate() {
        tv += (zeros.iter().filter(|&&z| z == k).count() as f64 / t - q).abs();
    }
    assert_eq!(p.summary("tv_distance"), f6(tv / 2.0));
}

#[test]
fn coupon_and_mapping_summaries_match_rows() {
    let rep = run_coupon_experiment(
        &Harness::new(2),
        &CouponParams {
            n: 50,
            trials: 100,
            colours: ColourCount::Auto,
        },
    )
    .unwrap();
    let p = parse(&rep.to_csv());
    let bound = 25.0 * 50f64.ln();
    let below = p
        .col("m_C")
        .iter()
        .filter(|m| m.parse::<f64>().unwrap() < bound)
        .count() as f64
        / 100.0;
    assert_eq!(p.summary("p_below_bound"), f6(below));

    let rep = run_mapping_experiment(
        &Harness::new(4),
        &MappingParams {
            n: 500,
            samples: 300,
            loopless: false,
        },
    )
    .unwrap();
    let p = parse(&rep.to_csv());
    assert_eq!(
        p.header,
        ["sample", "loops", "cycles", "largest_component", "eta_statistic"]
    );
    let loops: f64 = p.col("loops").iter().map(|x| x.parse::<f64>().unwrap()).sum();
    assert_eq!(p.summary("mean_loops"), f6(loops / 300.0));
    let thr = 500f64.powf(1.0 / 6.0);
    let below = p
        .col("eta_statistic")
        .iter()
        .filter(|x| x.parse::<f64>().unwrap() < thr)
        .count() as f64
        / 300.0;
    assert_eq!(p.summary("p_eta_below_threshold"), f6(below));
}

#[test]
fn half_widths_fit_acceptance_tolerances() {
    // Worst case p = 1/2 at the stated trial counts.
    assert!(proportion_half_width(0.5, 1000) <= 0.05);
    assert!(proportion_half_width(0.5, 500) <= 0.05);
    // Loop-count mean: variance (1 - 1/n) per sample at n = 1000, 10^4 samples.
    assert!(1.96 * (0.999f64 / 10_000.0).sqrt() <= 0.05);
    // The 0.99 coupon threshold sits above the bound only if p is close to 1.
    assert!(proportion_half_width(0.995, 500) < 0.01);
}

#[test]
fn n2_theorem_is_certain() {
    let rep = theorem(1, 1, 2, 50, DecisionMode::Exact);
    assert_eq!(rep.summary_value("p_a_eq_z"), Some(1.0));
    assert_eq!(rep.summary_value("p_r_at_z"), Some(1.0));
}

#[test]
fn oracle_and_exact_give_identical_rows_at_n5() {
    let exact = theorem(99, 1, 5, 10_000, DecisionMode::Exact);
    let oracle = theorem(99, 1, 5, 10_000, DecisionMode::Oracle);
    let (pe, po) = (parse(&exact.to_csv()), parse(&oracle.to_csv()));
    for col in ["m_C", "m_Z", "m_A", "m_R", "a_eq_z", "r_at_z"] {
        assert_eq!(pe.col(col), po.col(col), "{col}");
    }
}

#[test]
fn degree_report_is_honest() {
    let rep = run_degree_property_experiment(
        &Harness::new(3),
        &DegreeParams {
            n: 1000,
            trials: 5,
            subsets: 5,
            colours: ColourCount::Auto,
        },
    )
    .unwrap();
    // The multiplicity bounds hold; the low-degree count bound cannot hold at this n
    // because 43 eps log n exceeds the mean restricted in-degree.
    assert_eq!(rep.summary_value("p_colour_mult_ok"), Some(1.0));
    assert_eq!(rep.summary_value("p_same_colour_ok"), Some(1.0));
    assert_eq!(rep.summary_value("p_low_degree_ok"), Some(0.0));
    let n = 1000f64;
    let eps = n.ln().ln() / n.ln();
    let (lo, _) = window(1000);
    let w = rainbow_core::ColourCount::Auto.resolve(1000) as f64;
    let mean_restricted = lo as f64 / n * (45.0 * eps * n).round() / w;
    assert!(mean_restricted < 43.0 * eps * n.ln() / 10.0);
}

#[test]
fn invalid_parameters_are_rejected() {
    let h = Harness::new(1);
    assert!(run_poisson_experiment(
        &h,
        &PoissonParams {
            n: 10,
            c: 50.0,
            trials: 1,
            colours: ColourCount::Auto
        }
    )
    .is_err());
    assert!(run_degree_property_experiment(
        &h,
        &DegreeParams {
            n: 50,
            trials: 1,
            subsets: 1,
            colours: ColourCount::Auto
        }
    )
    .is_err());
    assert!(run_coupon_experiment(
        &h,
        &CouponParams {
            n: 9,
            trials: 1,
            colours: ColourCount::Auto
        }
    )
    .is_err());
}
