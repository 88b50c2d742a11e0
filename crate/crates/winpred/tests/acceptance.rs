//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::collections::{BTreeMap, HashMap};
use std::panic;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use winpred::csvio::{load_dataset, read_matches, read_metrics, write_matches, write_metrics};
use winpred_core::eval::{evaluate, quadrant_stats, split};
use winpred_core::features::{base_metrics_at, build_window_dataset, hero_vector, window_feature_names};
use winpred_core::lr::{penalized_gradient, penalized_log_likelihood, train_lr, DEFAULT_RIDGE_GRID};
use winpred_core::rf::{best_split, Split};
use winpred_core::select::{best_first_search, CfsEvaluator};
use winpred_core::synth::synthesize;
use winpred_core::{
    FeatureSubset, FeatureTable, Learner, LrConfig, MatchDataset, MatchOutcome, MatchRecord,
    MetricVariant, Representation, RfConfig, RunConfig, SearchConfig, Selection, SplitSpec,
    SynthConfig, Team, TeamPicks, Variant, DEFAULT_ROSTER_SIZE,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        match $cond {
            true => {}
            false => return Err(format!($($msg)*)),
        }
    };
}

const CHRONO: SplitSpec = SplitSpec::Chronological { train_fraction: 0.66 };

fn synth(n: usize, signal: f64, seed: u64) -> MatchDataset {
    synthesize(&SynthConfig {
        n_matches: n,
        kill_signal_strength: signal,
        seed,
        ..SynthConfig::default()
    })
    .expect("synthetic data")
}

fn lr(ridge: f64) -> Learner {
    Learner::Lr(LrConfig {
        ridge,
        standardize: true,
        ..LrConfig::default()
    })
}

fn rf(trees: usize, seed: u64) -> Learner {
    Learner::Rf(RfConfig {
        num_trees: trees,
        seed,
        ..RfConfig::default()
    })
}

fn run(rep: Representation, learner: Learner, selection: Selection) -> RunConfig {
    RunConfig::new(rep, learner, selection, CHRONO)
}

fn bayes_recovery() -> Check {
    let start = Instant::now();
    let ds = synth(5000, 0.5, 2024);
    let runs = [
        run(Representation::in_game(20), lr(1e-4), Selection::SingleFeature("Kills_R-D".into())),
        run(Representation::in_game(20), rf(100, 2024), Selection::Cfs),
    ];
    let mut detail = Vec::new();
    for r in &runs {
        let acc = evaluate(r, &ds).map_err(|e| e.to_string())?.accuracy;
        detail.push(format!("{} {} {:.2}%", r.learner.short_name(), r.selection, 100.0 * acc));
        ensure!((acc - 0.75).abs() <= 0.03, "{} {} accuracy {acc:.4} outside 0.75 ± 0.03", r.learner.label(), r.selection);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 60.0, "took {secs:.1}s");
    Ok(format!("{}; {secs:.1}s", detail.join(", ")))
}

fn null_signal() -> Check {
    let ds = synth(5000, 0.0, 99);
    let ingame = Representation::in_game(20);
    let hero = Representation::hero();
    let runs = [
        run(ingame, lr(1e-8), Selection::SingleFeature("Kills_R-D".into())),
        run(ingame, lr(1e-8), Selection::All),
        run(ingame, lr(1e-2), Selection::Cfs),
        run(ingame, lr(1.0), Selection::Wrapper),
        run(ingame, rf(100, 99), Selection::All),
        run(ingame, rf(100, 99), Selection::Cfs),
        run(hero, lr(1e-8), Selection::All),
        run(hero, lr(1e-2), Selection::Cfs),
        run(hero, rf(100, 99), Selection::All),
        run(hero, rf(50, 99), Selection::Cfs),
    ];
    let mut worst: f64 = 0.0;
    for r in &runs {
        let acc = evaluate(r, &ds).map_err(|e| e.to_string())?.accuracy;
        ensure!((acc - 0.5).abs() <= 0.04, "{} {} {} accuracy {acc:.4}", r.representation, r.learner.label(), r.selection);
        worst = worst.max((acc - 0.5).abs());
    }
    Ok(format!("{} configurations, largest deviation {:.2} points", runs.len(), 100.0 * worst))
}

fn random_lr_table(n: usize, d: usize, rng: &mut ChaCha8Rng) -> FeatureTable {
    let truth: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        let row: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let z: f64 = truth.iter().zip(&row).map(|(a, b)| a * b).sum();
        let radiant = match i {
            0 => true,
            1 => false,
            _ => rng.gen_bool(1.0 / (1.0 + (-z).exp())),
        };
        rows.push(row);
        labels.push(if radiant { MatchOutcome::RadiantWin } else { MatchOutcome::DireWin });
    }
    let names = (0..d).map(|j| format!("x{j}")).collect();
    FeatureTable::from_rows(names, &rows, labels).unwrap()
}

fn gradient_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let d = rng.gen_range(1..=6);
        let t = random_lr_table(rng.gen_range(5..40), d, &mut rng);
        let w: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b = rng.gen_range(-0.5..0.5);
        let ridge = rng.gen_range(0.0..2.0);
        let (g, gb) = penalized_gradient(&t, &w, b, ridge).map_err(|e| e.to_string())?;
        let f = |w: &[f64], b: f64| penalized_log_likelihood(&t, w, b, ridge).unwrap();
        for j in 0..=d {
            let (plus, minus) = if j < d {
                let (mut wp, mut wm) = (w.clone(), w.clone());
                wp[j] += h;
                wm[j] -= h;
                (f(&wp, b), f(&wm, b))
            } else {
                (f(&w, b + h), f(&w, b - h))
            };
            let numeric = (plus - minus) / (2.0 * h);
            let analytic = if j < d { g[j] } else { gb };
            worst = worst.max((numeric - analytic).abs() / analytic.abs().max(1.0));
        }
    }
    ensure!(worst < 1e-5, "max relative error {worst:e}");
    Ok(format!("20 instances, max relative error {worst:.1e}"))
}

fn ridge_shrinkage() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let t = random_lr_table(300, 6, &mut rng);
    let norms = DEFAULT_RIDGE_GRID
        .iter()
        .map(|&r| train_lr(&t, &LrConfig::with_ridge(r)).map(|m| m.weight_norm()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    ensure!(norms.windows(2).all(|p| p[1] <= p[0] + 1e-6), "norms {norms:?}");
    let shown: Vec<String> = norms.iter().map(|n| format!("{n:.4}")).collect();
    Ok(format!("|w| over the ridge grid: {}", shown.join(" ≥ ")))
}

fn entropy2(a: usize, b: usize) -> f64 {
    let n = (a + b) as f64;
    [a, b]
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| -(c as f64 / n) * (c as f64 / n).log2())
        .sum()
}

/// Scores every (feature, midpoint) pair; the first candidate better by more
/// than 1e-12 in (feature, threshold) order wins.
fn exhaustive_split(t: &FeatureTable, rows: &[usize], min_leaf: usize) -> Option<Split> {
    let radiant = |i: &usize| t.labels()[*i].is_radiant();
    let total_r = rows.iter().filter(|i| radiant(i)).count();
    let total_d = rows.len() - total_r;
    let n = rows.len() as f64;
    let parent = entropy2(total_d, total_r);
    let mut best: Option<Split> = None;
    for f in 0..t.n_features() {
        let mut values: Vec<f64> = rows.iter().map(|&i| t.value(i, f)).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for pair in values.windows(2) {
            let threshold = (pair[0] + pair[1]) / 2.0;
            let left: Vec<usize> = rows.iter().copied().filter(|&i| t.value(i, f) <= threshold).collect();
            let (nl, nr) = (left.len(), rows.len() - left.len());
            if nl < min_leaf || nr < min_leaf {
                continue;
            }
            let lr = left.iter().filter(|i| radiant(i)).count();
            let ld = nl - lr;
            let gain = parent
                - nl as f64 / n * entropy2(ld, lr)
                - nr as f64 / n * entropy2(total_d - ld, total_r - lr);
            if best.is_none_or(|b| gain > b.gain + 1e-12) {
                best = Some(Split { feature: f, threshold, gain });
            }
        }
    }
    best
}

fn rf_split_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut nodes = 0;
    let mut multi = 0;
    while nodes < 40 {
        let n = rng.gen_range(2..=12);
        let d = rng.gen_range(1..=4);
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.gen_range(0..4) as f64).collect()).collect();
        let labels = (0..n)
            .map(|_| if rng.gen_bool(0.5) { MatchOutcome::RadiantWin } else { MatchOutcome::DireWin })
            .collect();
        let t = FeatureTable::from_rows((0..d).map(|j| format!("f{j}")).collect(), &rows, labels).unwrap();
        let idx: Vec<usize> = (0..n).collect();
        let features: Vec<usize> = (0..d).collect();
        let got = best_split(&t, &idx, &features, 1);
        let want = exhaustive_split(&t, &idx, 1);
        match (got, want) {
            (None, None) => {}
            (Some(g), Some(w)) => {
                ensure!(
                    g.feature == w.feature && g.threshold == w.threshold && (g.gain - w.gain).abs() < 1e-12,
                    "node {nodes}: chose {g:?}, oracle {w:?}"
                );
                if d > 1 {
                    multi += 1;
                }
            }
            other => return Err(format!("node {nodes}: {other:?}")),
        }
        nodes += 1;
    }
    Ok(format!("{nodes} nodes agree, {multi} of them splitting among several features"))
}

fn entropy_of<T: Ord>(items: impl Iterator<Item = T>) -> f64 {
    let mut counts = BTreeMap::new();
    let mut n = 0.0;
    for x in items {
        *counts.entry(x).or_insert(0.0) += 1.0;
        n += 1.0;
    }
    counts.values().map(|&c: &f64| -(c / n) * (c / n).log2()).sum()
}

fn su(a: &[i64], b: &[i64]) -> f64 {
    let (ha, hb) = (entropy_of(a.iter()), entropy_of(b.iter()));
    if ha + hb == 0.0 {
        return 0.0;
    }
    2.0 * (ha + hb - entropy_of(a.iter().zip(b))) / (ha + hb)
}

fn merit_oracle(cols: &[Vec<i64>], class: &[i64], subset: &[usize]) -> f64 {
    let k = subset.len() as f64;
    let rcf = subset.iter().map(|&f| su(&cols[f], class)).sum::<f64>() / k;
    let mut rff = Vec::new();
    for (i, &a) in subset.iter().enumerate() {
        for &b in &subset[i + 1..] {
            rff.push(su(&cols[a], &cols[b]));
        }
    }
    let rff = if rff.is_empty() { 0.0 } else { rff.iter().sum::<f64>() / rff.len() as f64 };
    k * rcf / (k + k * (k - 1.0) * rff).sqrt()
}

fn cfs_oracle() -> Check {
    // Five categorical columns agreeing with the class at decreasing rates;
    // column 3 is a noisy copy of column 0.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 160;
    let class: Vec<i64> = (0..n).map(|i| (i % 2) as i64).collect();
    let mut cols: Vec<Vec<i64>> = [0.9, 0.8, 0.7, 0.5, 0.6]
        .iter()
        .map(|&p| class.iter().map(|&c| if rng.gen_bool(p) { c } else { 1 - c } * 3 + rng.gen_range(0..3)).collect())
        .collect();
    cols[3] = cols[0].iter().map(|&v| if rng.gen_bool(0.95) { v } else { 5 - v }).collect();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| cols.iter().map(|c| c[i] as f64).collect()).collect();
    let labels = class.iter().map(|&c| if c == 1 { MatchOutcome::RadiantWin } else { MatchOutcome::DireWin }).collect();
    let t = FeatureTable::from_rows((0..5).map(|j| format!("f{j}")).collect(), &rows, labels).unwrap();
    let eval = CfsEvaluator::new(&t).map_err(|e| e.to_string())?;
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut worst: f64 = 0.0;
    for mask in 1u32..32 {
        let subset: Vec<usize> = (0..5).filter(|b| mask & (1 << b) != 0).collect();
        let want = merit_oracle(&cols, &class, &subset);
        let got = eval.merit(&FeatureSubset::new(subset.clone()));
        worst = worst.max((got - want).abs());
        if want > best.0 {
            best = (want, subset);
        }
    }
    ensure!(worst < 1e-9, "merit differs by {worst:e}");
    let (found, score) = best_first_search(&eval, 5, &SearchConfig { stale_limit: 5 }).map_err(|e| e.to_string())?;
    ensure!(found.indices() == best.1.as_slice(), "search found {:?}, optimum {:?}", found.indices(), best.1);
    ensure!((score - best.0).abs() < 1e-9, "search score {score} vs {}", best.0);
    Ok(format!("31 merits within {worst:.0e}; best-first found optimum {:?}", best.1))
}

const METRIC_NAMES: [&str; 6] = ["DamageDealt", "Kills", "LastHits", "NetWorth", "TowerDamage", "XpGained"];

/// `(match_id, minute)` → the twelve raw columns in file order.
fn raw_metrics(path: &Path) -> HashMap<(String, u32), Vec<f64>> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .skip(1)
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            let values = fields[2..].iter().map(|v| v.parse().unwrap()).collect();
            ((fields[0].to_string(), fields[1].parse().unwrap()), values)
        })
        .collect()
}

/// Recomputes a window cell from its name, e.g. `NetWorth_dR@t-3`.
fn cell_from_name(raw: &HashMap<(String, u32), Vec<f64>>, id: &str, t: u32, name: &str) -> f64 {
    let (base, offset) = name.split_once("@t").unwrap();
    let tau = t - offset.trim_start_matches('-').parse::<u32>().unwrap_or(0);
    let (metric, variant) = base.split_once('_').unwrap();
    let m = METRIC_NAMES.iter().position(|n| *n == metric).unwrap();
    let at = |minute: u32| &raw[&(id.to_string(), minute)];
    let (dire, radiant) = (at(tau)[2 * m], at(tau)[2 * m + 1]);
    match variant {
        "D" => dire,
        "R" => radiant,
        "R-D" => radiant - dire,
        "dD" => dire - at(tau - 1)[2 * m],
        "dR" => radiant - at(tau - 1)[2 * m + 1],
        other => panic!("unknown variant {other}"),
    }
}

fn featurizer_oracle() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let ds = synth(300, 0.5, 17);
    let (mp, xp) = (dir.path().join("matches.csv"), dir.path().join("metrics.csv"));
    write_matches(std::fs::File::create(&mp).unwrap(), ds.matches()).unwrap();
    write_metrics(std::fs::File::create(&xp).unwrap(), &ds).unwrap();

    let loaded = load_dataset(&mp, Some(&xp), DEFAULT_ROSTER_SIZE).map_err(|e| e.to_string())?;
    let raw = raw_metrics(&xp);
    let names = window_feature_names();
    let built = build_window_dataset(&loaded, 20).map_err(|e| e.to_string())?;
    let mut cells = 0;
    for v in &built.vectors {
        for (name, &value) in names.iter().zip(&v.features) {
            let want = cell_from_name(&raw, &v.match_id, 20, name);
            ensure!(value == want, "{} {name}: {value} vs {want}", v.match_id);
            cells += 1;
        }
    }

    let mut sums = 0;
    for m in loaded.matches() {
        for m_idx in 0..6 {
            for (team, variant, col) in [(Team::Dire, Variant::DeltaD, 0), (Team::Radiant, Variant::DeltaR, 1)] {
                let metric = winpred_core::Metric::ALL[m_idx];
                let mv = MetricVariant::new(metric, variant);
                let mut sum = 0.0;
                for t in 1..=m.duration_minutes {
                    sum += base_metrics_at(&loaded, &m.match_id, t).unwrap().get(mv);
                }
                let end = raw[&(m.match_id.clone(), m.duration_minutes)][2 * m_idx + col];
                let begin = raw[&(m.match_id.clone(), 0)][2 * m_idx + col];
                ensure!(sum == end - begin, "{} {metric:?} {team:?}: {sum} vs {}", m.match_id, end - begin);
                sums += 1;
            }
        }
    }
    Ok(format!("{cells} cells over {} matches exact; {sums} telescoping sums exact", built.vectors.len()))
}

fn hero_invariants() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut pool: Vec<u16> = (0..DEFAULT_ROSTER_SIZE).collect();
    for i in 0..1000 {
        pool.shuffle(&mut rng);
        let m = MatchRecord {
            match_id: format!("h{i}"),
            start_time: i as i64,
            is_professional: true,
            tournament_id: None,
            duration_minutes: 30,
            radiant_heroes: TeamPicks::new("h", &pool[..5]).unwrap(),
            dire_heroes: TeamPicks::new("h", &pool[5..10]).unwrap(),
            winner: MatchOutcome::RadiantWin,
            skill_score: None,
        };
        let v = hero_vector(&m, DEFAULT_ROSTER_SIZE).map_err(|e| e.to_string())?;
        let plus = v.values.iter().filter(|&&x| x == 1).count();
        let minus = v.values.iter().filter(|&&x| x == -1).count();
        let sum: i32 = v.values.iter().map(|&x| x as i32).sum();
        ensure!(plus == 5 && minus == 5 && sum == 0, "match {i}: {plus} +1, {minus} -1, sum {sum}");
        let swapped = hero_vector(&m.swap_teams(), DEFAULT_ROSTER_SIZE).unwrap();
        ensure!(v.values.iter().zip(&swapped.values).all(|(a, b)| *a == -*b), "match {i}: swap not antisymmetric");
        ensure!(swapped.label == v.label.flipped(), "match {i}: swap keeps the label");
    }
    Ok("1000 matches: five +1, five -1, sum 0, swap antisymmetric".into())
}

fn split_correctness() -> Check {
    let ds = synthesize(&SynthConfig {
        n_matches: 2000,
        pro_fraction: 0.5,
        tournament_id: "the-cup".into(),
        tournament_matches: 40,
        seed: 21,
        ..SynthConfig::default()
    })
    .map_err(|e| e.to_string())?;
    let (train, test) = split(ds.matches(), &CHRONO).map_err(|e| e.to_string())?;
    let latest_train = train.iter().map(|m| m.start_time).max().unwrap();
    let earliest_test = test.iter().map(|m| m.start_time).min().unwrap();
    ensure!(earliest_test >= latest_train, "test match at {earliest_test} precedes train match at {latest_train}");
    ensure!(train.len() == 1320, "train size {}", train.len());

    let tagged = ds.matches().iter().filter(|m| m.tournament_id.as_deref() == Some("the-cup")).count();
    let holdout = SplitSpec::TournamentHoldout { tournament_id: "the-cup".into() };
    let (train, test) = split(ds.matches(), &holdout).map_err(|e| e.to_string())?;
    ensure!(test.len() == tagged && tagged == 40, "holdout test {} vs {tagged} tagged", test.len());
    ensure!(train.len() + test.len() == 2000, "sides do not cover the data");
    Ok(format!("chronological 1320/680 ordered; holdout test {} = tournament size", test.len()))
}

fn sweep_determinism() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let bin = env!("CARGO_BIN_EXE_winpred");
    let ok = |cmd: &mut Command| {
        let out = cmd.output().unwrap();
        if out.status.success() {
            Ok(())
        } else {
            Err(String::from_utf8_lossy(&out.stderr).into_owned())
        }
    };
    ok(Command::new(bin).args(["synth", "--n", "800", "--seed", "5", "--tournament-matches", "20", "--pro-fraction", "0.4", "--out-dir"]).arg(d))?;
    std::fs::write(
        d.join("grid.txt"),
        "learner = lr\nsingle_feature = Kills_R-D\n\nlearner = rf\ntrees = 30\nselection = cfs\n\n\
         learner = lr\nridge = 1\nselection = wrapper\n\nrepresentation = hero\nlearner = rf\ntrees = 30\n\n\
         learner = rf\ntrees = 20\nsplit = holdout:synth-major\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for (i, workers) in ["1", "3"].iter().enumerate() {
        let report = d.join(format!("report{i}.csv"));
        let md = d.join(format!("table{i}.md"));
        ok(Command::new(bin)
            .env("WINPRED_WORKERS", workers)
            .arg("sweep")
            .arg("--matches")
            .arg(d.join("matches.csv"))
            .arg("--metrics")
            .arg(d.join("metrics.csv"))
            .arg("--grid")
            .arg(d.join("grid.txt"))
            .args(["--seed", "13", "--report"])
            .arg(&report)
            .arg("--markdown")
            .arg(&md))?;
        outputs.push((std::fs::read(report).unwrap(), std::fs::read(md).unwrap()));
    }
    ensure!(outputs[0].0 == outputs[1].0, "report files differ");
    ensure!(outputs[0].1 == outputs[1].1, "markdown tables differ");
    let rows = outputs[0].0.iter().filter(|&&b| b == b'\n').count() - 1;
    ensure!(rows == 5, "expected 5 report rows, found {rows}");
    Ok(format!("{rows}-run sweep byte-identical with 1 and 3 workers"))
}

fn quadrant_statistic() -> Check {
    let ds = synth(1500, 0.5, 31);
    let t = 10;
    let q = quadrant_stats(&ds, t).map_err(|e| e.to_string())?;
    let (mut above, mut above_r, mut below, mut below_d) = (0, 0, 0, 0);
    for m in ds.matches().iter().filter(|m| m.duration_minutes >= t) {
        let s = ds.sample(&m.match_id, t).unwrap();
        let k = winpred_core::Metric::Kills.index();
        let diff = s.radiant[k] - s.dire[k];
        if diff > 0.0 {
            above += 1;
            above_r += m.winner.is_radiant() as usize;
        } else if diff < 0.0 {
            below += 1;
            below_d += !m.winner.is_radiant() as usize;
        }
    }
    ensure!(q.radiant_above() == Some(above_r as f64 / above as f64), "radiant_above {:?} vs {above_r}/{above}", q.radiant_above());
    ensure!(q.dire_below() == Some(below_d as f64 / below as f64), "dire_below {:?} vs {below_d}/{below}", q.dire_below());

    // Kills differences +3, +1, -2, -4 with winners R, D, D, R.
    let mut matches = String::from("match_id,start_time,is_professional,tournament_id,duration_minutes,radiant_heroes,dire_heroes,winner,skill_score\n");
    let mut metrics = String::from("match_id,minute,dire_damage,radiant_damage,dire_kills,radiant_kills,dire_lasthits,radiant_lasthits,dire_networth,radiant_networth,dire_towerdamage,radiant_towerdamage,dire_xp,radiant_xp\n");
    for (i, (diff, winner)) in [(3, "RadiantWin"), (1, "DireWin"), (-2, "DireWin"), (-4, "RadiantWin")].iter().enumerate() {
        matches.push_str(&format!("q{i},{i},true,,{t},\"1;2;3;4;5\",\"6;7;8;9;10\",{winner},\n"));
        let (dire, radiant) = if *diff > 0 { (0, *diff) } else { (-diff, 0) };
        for minute in 0..=t {
            let (d, r) = if minute == t { (dire, radiant) } else { (0, 0) };
            metrics.push_str(&format!("q{i},{minute},0,0,{d},{r},0,0,0,0,0,0,0,0\n"));
        }
    }
    let hand = read_metrics(metrics.as_bytes(), read_matches(matches.as_bytes(), DEFAULT_ROSTER_SIZE).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let hq = quadrant_stats(&hand, t).map_err(|e| e.to_string())?;
    ensure!(hq.radiant_above() == Some(0.5) && hq.dire_below() == Some(0.5), "hand example gave {:?} / {:?}", hq.radiant_above(), hq.dire_below());
    Ok(format!("recount {above_r}/{above} and {below_d}/{below} matches; hand example 1/2 and 1/2"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("synthetic Bayes-rate recovery", bayes_recovery),
        ("null-signal sanity", null_signal),
        ("LR gradient check", gradient_check),
        ("LR ridge shrinkage", ridge_shrinkage),
        ("RF split oracle", rf_split_oracle),
        ("CFS merit and search oracle", cfs_oracle),
        ("featurizer oracle", featurizer_oracle),
        ("hero-vector invariants", hero_invariants),
        ("split correctness", split_correctness),
        ("sweep determinism", sweep_determinism),
        ("quadrant statistic", quadrant_statistic),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
