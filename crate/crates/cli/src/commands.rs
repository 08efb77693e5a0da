//! Subcommand implementations.

use std::time::Instant;

use loccg::numerics::{format_ratio, to_f64, Rational};
use loccg::quantum::report_json;
use loccg::{
    alpha, brute_force_value, dual_and_closed_form, dual_from_primal, dual_majority_conjecture,
    evaluate_protocol, extract_observables, ns_box_value, protocol1, protocol2_strategy,
    quantum_value, reduce, scan_majority_crossover, solve_primal, strategy_value, vc_and,
    vc_half_half, vc_majority, vc_threshold_k1, vq_threshold_formula, DeterministicStrategy,
    Grouping, ThresholdGame,
};
use rayon::prelude::*;

use crate::report::{real17, real6, win_probability, ParamsDto, QuantumDto, RunReport, TimingsDto};
use crate::{CliError, DualKind, GameArgs, GlobalOpts, Method};

type CmdResult = Result<(), CliError>;

fn parse_fraction(text: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::new(2, format!("invalid fraction {text:?}, expected R/S or R"));
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a, b),
        None => (text, "1"),
    };
    let num: u64 = num.trim().parse().map_err(|_| bad())?;
    let den: u64 = den.trim().parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok((num, den))
}

fn parse_game(args: &GameArgs) -> Result<(ThresholdGame, Grouping), CliError> {
    let game = match (&args.t, &args.t_abs) {
        (Some(frac), None) => {
            let (r, s) = parse_fraction(frac)?;
            if r > s {
                // values above 1 can only mean an absolute threshold
                ThresholdGame::from_abs_threshold(args.n, r, s)?
            } else {
                let to32 = |x: u64| {
                    u32::try_from(x).map_err(|_| CliError::new(2, "threshold fraction too large"))
                };
                ThresholdGame::new(args.n, to32(r)?, to32(s)?)?
            }
        }
        (None, Some(abs)) => {
            let (num, den) = parse_fraction(abs)?;
            ThresholdGame::from_abs_threshold(args.n, num, den)?
        }
        _ => return Err(CliError::new(2, "one of --t or --t-abs is required")),
    };
    let grouping = Grouping::new(args.k, args.n)?;
    Ok((game, grouping))
}

fn params_dto(game: &ThresholdGame, grouping: &Grouping) -> ParamsDto {
    ParamsDto {
        n: game.n(),
        k: grouping.k(),
        t: format!("{}/{}", game.r(), game.s()),
        t_abs: format_ratio(&game.t()),
    }
}

pub fn cmd_reduce(_global: &GlobalOpts, args: &GameArgs) -> CmdResult {
    let (game, grouping) = parse_game(args)?;
    let (bg, _) = reduce(&game, &grouping)?;
    println!("{}", bg.to_json());
    Ok(())
}

/// The closed-form classical value applicable to the game class, with a
/// label saying which form was used. Games are classified by their
/// effective integer threshold, so e.g. t = 8 on 15 players lands in the
/// MAJORITY family exactly like t = 15/2.
fn classical_formula(
    game: &ThresholdGame,
    grouping: &Grouping,
) -> Result<(String, Rational), CliError> {
    let (n, k) = (game.n(), grouping.k());
    if k == 1 {
        return Ok(("formula:threshold-k1".into(), vc_threshold_k1(game)?));
    }
    if game.t_ceil() == n {
        return Ok(("formula:and".into(), vc_and(n, k)));
    }
    if game.t_ceil() == n.div_ceil(2) {
        if 2 * k == n {
            return Ok(("formula:half-half".into(), vc_half_half(n)?));
        }
        return Ok(("formula:majority-gamma".into(), vc_majority(n, k)?));
    }
    Err(CliError::new(
        2,
        format!("no classical closed form for t={} with k={k}", game.t()),
    ))
}

fn classical_protocol(
    game: &ThresholdGame,
    grouping: &Grouping,
) -> Result<(String, Rational), CliError> {
    let (bg, _) = reduce(game, grouping)?;
    let strategy = if grouping.k() == 1 {
        DeterministicStrategy {
            alice: vec![1; bg.ma()],
            bob: vec![1; bg.mb()],
        }
    } else {
        protocol2_strategy(game, grouping)?
    };
    Ok((
        "protocol:deterministic".into(),
        strategy_value(&bg, &strategy)?,
    ))
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_value(
    global: &GlobalOpts,
    args: &GameArgs,
    classical: bool,
    quantum: bool,
    both: bool,
    methods: &[Method],
) -> CmdResult {
    let (game, grouping) = parse_game(args)?;
    let cfg = global.solver_config();
    let both = both || (!classical && !quantum);
    let want_classical = classical || both;
    let want_quantum = quantum || both;

    let mut report = RunReport {
        parameters: params_dto(&game, &grouping),
        classical: None,
        quantum: None,
        ratio: None,
        timings_ms: TimingsDto::default(),
    };

    let mut classical_results: Vec<(String, Rational)> = Vec::new();
    if want_classical {
        let start = Instant::now();
        let chosen: Vec<Method> = methods
            .iter()
            .copied()
            .filter(|m| matches!(m, Method::Formula | Method::Bruteforce | Method::Protocol))
            .collect();
        let chosen = if chosen.is_empty() && methods.contains(&Method::Sdp) && !want_quantum
        {
            return Err(CliError::new(2, "--method sdp computes quantum values only"));
        } else if chosen.is_empty() {
            vec![Method::Bruteforce]
        } else {
            chosen
        };
        for m in chosen {
            let (label, value) = match m {
                Method::Formula => classical_formula(&game, &grouping)?,
                Method::Bruteforce => {
                    let (bg, _) = reduce(&game, &grouping)?;
                    ("bruteforce".to_string(), brute_force_value(&bg)?.0)
                }
                Method::Protocol => classical_protocol(&game, &grouping)?,
                Method::Sdp => continue,
            };
            classical_results.push((label, value));
        }
        for pair in classical_results.windows(2) {
            if pair[0].1 != pair[1].1 {
                return Err(CliError::new(
                    4,
                    format!(
                        "classical methods disagree: {} gives {}, {} gives {}",
                        pair[0].0,
                        format_ratio(&pair[0].1),
                        pair[1].0,
                        format_ratio(&pair[1].1)
                    ),
                ));
            }
        }
        if let Some((label, value)) = classical_results.first() {
            let label = if classical_results.len() > 1 {
                format!(
                    "{} (cross-checked {} ways)",
                    label,
                    classical_results.len()
                )
            } else {
                label.clone()
            };
            let ms = global.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
            report.classical_from(&label, value, ms);
        }
    }

    if want_quantum {
        let start = Instant::now();
        let chosen: Vec<Method> = {
            let q: Vec<Method> = methods
                .iter()
                .copied()
                .filter(|m| matches!(m, Method::Formula | Method::Protocol | Method::Sdp))
                .collect();
            if q.is_empty() {
                vec![Method::Sdp]
            } else {
                q
            }
        };
        let mut results: Vec<(String, f64)> = Vec::new();
        let mut dto: Option<QuantumDto> = None;
        for m in chosen {
            match m {
                Method::Formula => {
                    if grouping.k() != 1 {
                        return Err(CliError::new(2, "quantum closed form needs k = 1"));
                    }
                    let v: f64 = vq_threshold_formula(game.n(), &alpha(&game)?)?;
                    results.push(("formula:threshold-k1".into(), v));
                }
                Method::Protocol => {
                    if grouping.k() != 1 {
                        return Err(CliError::new(2, "the planar closed-form protocol needs k = 1"));
                    }
                    let qp = protocol1::<f64>(game.n(), &alpha(&game)?)?;
                    let (bg, _) = reduce(&game, &grouping)?;
                    results.push(("protocol:planar".into(), evaluate_protocol(&bg, &qp)?));
                }
                Method::Sdp => {
                    let assessment = quantum_value::<f64>(&game, &grouping, &cfg)?;
                    if global.require_certificate && !assessment.certificate.certified {
                        return Err(CliError::new(
                            3,
                            format!(
                                "quantum value {} is not certified (min eig {}, gap {})",
                                assessment.value,
                                assessment.certificate.min_eig_k,
                                assessment.certificate.gap
                            ),
                        ));
                    }
                    results.push(("sdp".into(), assessment.value));
                    dto = Some(QuantumDto {
                        method: "sdp".into(),
                        value: assessment.value,
                        winning_probability: win_probability(assessment.value),
                        certified: Some(assessment.certificate.certified),
                        dual_value: Some(assessment.certificate.dual_value),
                        min_eig_k: Some(assessment.certificate.min_eig_k),
                        gap: Some(assessment.certificate.gap),
                    });
                }
                Method::Bruteforce => {
                    return Err(CliError::new(2, "--method bruteforce computes classical values only"))
                }
            }
        }
        for pair in results.windows(2) {
            if (pair[0].1 - pair[1].1).abs() > 1e-7 {
                return Err(CliError::new(
                    4,
                    format!(
                        "quantum methods disagree: {} gives {}, {} gives {}",
                        pair[0].0, pair[0].1, pair[1].0, pair[1].1
                    ),
                ));
            }
        }
        if let Some((label, value)) = results.first() {
            let label = if results.len() > 1 {
                format!("{} (cross-checked {} ways)", label, results.len())
            } else {
                label.clone()
            };
            report.quantum = Some(dto.unwrap_or_else(|| QuantumDto {
                method: label.clone(),
                value: *value,
                winning_probability: win_probability(*value),
                certified: None,
                dual_value: None,
                min_eig_k: None,
                gap: None,
            }));
            if let Some(q) = report.quantum.as_mut() {
                q.method = label;
            }
            report.timings_ms.quantum = global.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
        }
    }

    if let (Some(c), Some(q)) = (&report.classical, &report.quantum) {
        report.ratio = Some(q.value / c.decimal);
    }

    if global.json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        print!("{}", report.render_human());
    }
    Ok(())
}

pub fn cmd_certify(global: &GlobalOpts, args: &GameArgs, dual: DualKind) -> CmdResult {
    let (game, grouping) = parse_game(args)?;
    let cfg = global.solver_config();
    let (n, k) = (game.n(), grouping.k());

    let output = match dual {
        DualKind::Kkt => {
            let (bg, _) = reduce(&game, &grouping)?;
            let ps = solve_primal::<f64>(&bg, &cfg)?;
            let cert = dual_from_primal(&bg, &ps, &cfg)?;
            let protocol = extract_observables(&ps).ok();
            if global.require_certificate && !cert.certified {
                return Err(CliError::new(3, "kkt dual does not certify"));
            }
            report_json(ps.value, &cert, protocol.as_ref())
        }
        DualKind::AndClosed => {
            if game.r() != game.s() {
                return Err(CliError::new(2, "the closed-form dual applies to t = n"));
            }
            let cert = dual_and_closed_form::<f64>(n, k, &cfg)?;
            if global.require_certificate && !cert.certified {
                return Err(CliError::new(3, "closed-form dual does not certify"));
            }
            report_json(cert.dual_value, &cert, None)
        }
        DualKind::MajorityConjecture => {
            if game.r() != 1 || game.s() != 2 {
                return Err(CliError::new(2, "the conjectured dual applies to t = n/2"));
            }
            let cert = dual_majority_conjecture::<f64>(n, k, &cfg)?;
            if global.require_certificate && !cert.certified {
                return Err(CliError::new(3, "conjectured dual does not certify"));
            }
            report_json(cert.dual_value, &cert, None)
        }
    };
    println!("{output}");
    Ok(())
}

pub fn cmd_sweep_nk(global: &GlobalOpts, ks: &[u32], n_max: u32) -> CmdResult {
    let cfg = global.solver_config();
    let scans = ks
        .iter()
        .map(|&k| scan_majority_crossover(k, n_max, &cfg))
        .collect::<Result<Vec<_>, _>>()?;

    if global.json {
        let rows: Vec<serde_json::Value> = scans
            .iter()
            .map(|s| serde_json::json!({ "k": s.k, "n_k": s.n_k }))
            .collect();
        println!("{}", serde_json::to_string_pretty(&rows).unwrap());
    } else {
        println!("k,n_k");
        for s in &scans {
            match s.n_k {
                Some(n) => println!("{},{}", s.k, n),
                None => println!("{},", s.k),
            }
        }
    }
    Ok(())
}

pub fn cmd_table3(global: &GlobalOpts) -> CmdResult {
    let cfg = global.solver_config();
    let rows: Vec<Result<String, CliError>> = (4u32..=10)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| -> Result<String, CliError> {
            let game = ThresholdGame::majority(n)?;
            let grouping = Grouping::new(2, n)?;
            let assessment = quantum_value::<f64>(&game, &grouping, &cfg)?;
            let classical = vc_majority(n, 2)?;
            let classical_f = to_f64(&classical);
            let angles = assessment
                .protocol
                .as_ref()
                .map(|p| {
                    (
                        p.theta.iter().map(|a| real17(*a)).collect::<Vec<_>>().join(";"),
                        p.phi.iter().map(|a| real17(*a)).collect::<Vec<_>>().join(";"),
                    )
                })
                .unwrap_or_default();
            Ok(format!(
                "{},{},{},{},{},{},{},{};;{}",
                n - 2,
                n,
                real17(assessment.value),
                format_ratio(&classical),
                real17(classical_f),
                real17(assessment.value / classical_f),
                assessment.certificate.certified,
                angles.0,
                angles.1
            ))
        })
        .collect();

    println!("n_minus_2,n,quantum,classical_exact,classical,ratio,certified,angles");
    for row in rows {
        println!("{}", row?);
    }
    Ok(())
}

pub fn cmd_grid(global: &GlobalOpts, n_max: u32, k: u32) -> CmdResult {
    if k != 1 {
        return Err(CliError::new(2, "the closed-form grid is defined for k = 1"));
    }
    let rows: Vec<Result<Vec<String>, CliError>> = (2u32..=n_max)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| -> Result<Vec<String>, CliError> {
            let mut lines = Vec::new();
            for t in n.div_ceil(2)..=n {
                let game = ThresholdGame::from_abs_threshold(n, t as u64, 1)?;
                let v: f64 = vq_threshold_formula(n, &alpha(&game)?)?;
                lines.push(format!(
                    "{},{},{},{}",
                    n,
                    t,
                    real17(v),
                    real17(win_probability(v))
                ));
            }
            Ok(lines)
        })
        .collect();

    println!("n,t,value,winning_probability");
    for chunk in rows {
        for line in chunk? {
            println!("{line}");
        }
    }
    let _ = global;
    Ok(())
}

pub fn cmd_majority_scaling(global: &GlobalOpts, n_max: u32) -> CmdResult {
    let cfg = global.solver_config();
    let ns: Vec<u32> = (4..=n_max).step_by(2).collect();
    let rows: Vec<Result<String, CliError>> = ns
        .par_iter()
        .map(|&n| -> Result<String, CliError> {
            let game = ThresholdGame::majority(n)?;
            let grouping = Grouping::new(n / 2, n)?;
            let classical = vc_half_half(n)?;
            let classical_f = to_f64(&classical);
            let assessment = quantum_value::<f64>(&game, &grouping, &cfg)?;
            if global.require_certificate && !assessment.certificate.certified {
                return Err(CliError::new(3, format!("n={n}: quantum value uncertified")));
            }
            Ok(format!(
                "{},{},{},{},{}",
                n,
                real17(classical_f),
                real17(assessment.value),
                real17(assessment.value - classical_f),
                assessment.certificate.certified
            ))
        })
        .collect();

    println!("n,classical,quantum,gap,certified");
    for row in rows {
        println!("{}", row?);
    }
    Ok(())
}

pub fn cmd_ns_box(global: &GlobalOpts, args: &GameArgs) -> CmdResult {
    let (game, grouping) = parse_game(args)?;
    let (bg, _) = reduce(&game, &grouping)?;
    let value = ns_box_value(&bg);
    if global.json {
        println!(
            "{}",
            serde_json::json!({
                "value": format_ratio(&value),
                "winning_probability": real6(win_probability(to_f64(&value))),
            })
        );
    } else {
        println!(
            "no-signalling box value: {} (win prob {})",
            format_ratio(&value),
            real6(win_probability(to_f64(&value)))
        );
    }
    Ok(())
}
