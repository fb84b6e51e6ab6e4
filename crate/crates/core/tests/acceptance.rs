//! Acceptance criteria 1-12. Each test prints one PASS/FAIL line.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsscma::channel::{complex_gaussian, soft_sic, superpose, transmit, ChannelKind, ChannelRealization, PowerAllocation};
use rsscma::ldpc::{bp_decode, ParityCheckMatrix};
use rsscma::qpsk::{qpsk_hard_demod, qpsk_llr, soft_symbols, LlrFrame, BIT_MAP, POINTS};
use rsscma::rate_split::complexity_ratio;
use rsscma::scma::{ml_detect, mpa_detect, scma_encode, CodebookSet};
use rsscma::sim::*;
use rsscma::LLR_MAX;

fn verdict(n: u32, name: &str, pass: bool, detail: String) {
    println!(
        "criterion {n:>2} {}: {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} ({name}) failed: {detail}");
}

fn scma_6x4() -> CodebookSet {
    CodebookSet::builtin("scma-6x4").unwrap()
}

#[test]
fn criterion_01_overloading_factor() {
    let rows = analyze(6, 4, 4, 3, &[0.25, 0.5, 0.0, 1.0, 0.9, 0.75, 0.6]).unwrap();
    let l: Vec<f64> = rows.iter().map(|r| r.lambda).collect();
    let example = (l[0] - 43.0 / 22.0).abs() < 1e-9;
    let exact = l[1] == 2.5 && l[2] == 1.5 && l[3] == 1.0;
    // legend percentages are quoted as whole numbers
    let legends = [(l[4], 135.0), (l[5], 183.0), (l[6], 225.0)];
    let legend_ok = legends.iter().all(|(x, pct)| (100.0 * x - pct).abs() < 1.0);
    verdict(
        1,
        "overloading factor",
        example && exact && legend_ok,
        format!(
            "alpha=0.25 -> {:.10} (43/22 = {:.10}), alpha 0.5/0/1 -> {}/{}/{}, legends {:?}",
            l[0],
            43.0 / 22.0,
            l[1],
            l[2],
            l[3],
            legends.map(|(x, p)| (format!("{:.2}%", 100.0 * x), p))
        ),
    );
}

#[test]
fn criterion_02_complexity_ratio() {
    let r = complexity_ratio(4, 3);
    verdict(2, "complexity ratio", r == 69.0 / 64.0 && (r - 1.078).abs() < 5e-4, format!("{r}"));
}

fn brute_force_llr(y: Complex64, sigma2: f64) -> [f64; 2] {
    let metric: Vec<f64> = POINTS
        .iter()
        .map(|s| (-(y - s).norm_sqr() / (2.0 * sigma2)).exp())
        .collect();
    let mut out = [0.0; 2];
    for (b, o) in out.iter_mut().enumerate() {
        let (mut zero, mut one) = (0.0, 0.0);
        for (i, bits) in BIT_MAP.iter().enumerate() {
            if bits[b] == 0 {
                zero += metric[i];
            } else {
                one += metric[i];
            }
        }
        *o = (zero.ln() - one.ln()).clamp(-LLR_MAX, LLR_MAX);
    }
    out
}

#[test]
fn criterion_03_qpsk_llr() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst, mut sign_mismatch, mut off_boundary) = (0.0f64, 0, 0);
    for _ in 0..10_000 {
        let y = Complex64::new(rng.random_range(-2.5..2.5), rng.random_range(-2.5..2.5));
        let sigma2 = rng.random_range(0.05..3.0);
        let got = qpsk_llr(&[y], sigma2).unwrap().llrs[0];
        let want = brute_force_llr(y, sigma2);
        for b in 0..2 {
            worst = worst.max((got[b] - want[b]).abs());
        }
        if y.re.abs() > 1e-6 && y.im.abs() > 1e-6 {
            off_boundary += 1;
            let hard = qpsk_hard_demod(&[y])[0];
            let from_llr = got.map(|l| u8::from(l < 0.0));
            if hard != from_llr {
                sign_mismatch += 1;
            }
        }
    }
    verdict(
        3,
        "QPSK LLR",
        worst <= 1e-9 && sign_mismatch == 0,
        format!("max |LLR - brute force| = {worst:.2e}, sign mismatches {sign_mismatch}/{off_boundary}"),
    );
}

#[test]
fn criterion_04_soft_symbol_limits() {
    let zero = soft_symbols(&LlrFrame::from_llrs(vec![[0.0, 0.0]]))[0];
    let mut worst = 0.0f64;
    for (i, bits) in BIT_MAP.iter().enumerate() {
        let llr = bits.map(|b| if b == 0 { LLR_MAX } else { -LLR_MAX });
        let s = soft_symbols(&LlrFrame::from_llrs(vec![llr]))[0];
        worst = worst.max((s - POINTS[i]).norm());
    }
    verdict(
        4,
        "soft symbol limits",
        zero.norm() == 0.0 && worst <= 1e-9,
        format!("|s(0)| = {}, max saturated error {worst:.2e}", zero.norm()),
    );
}

#[test]
fn criterion_05_sic_identity() {
    let cb = scma_6x4();
    let pa = PowerAllocation::new(0.9156).unwrap();
    let nv = 0.05;
    let mut worst = 0.0f64;
    for frame in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(frame);
        let c: Vec<Complex64> = (0..4).map(|_| POINTS[rng.random_range(0..4)]).collect();
        let sym: Vec<usize> = (0..6).map(|_| rng.random_range(0..4)).collect();
        let enc = scma_encode(&sym, &cb).unwrap();
        let s = superpose(&c, &enc.per_user, &pa).unwrap();
        let ch_seed = 1_000_000 + frame;
        let mut ch_rng = ChaCha8Rng::seed_from_u64(ch_seed);
        let ch = ChannelRealization::draw(ChannelKind::Rayleigh, 4, nv, &mut ch_rng).unwrap();
        let y = transmit(&s, &ch, &mut ch_rng).unwrap();
        let residual = soft_sic(&y, &ch.gains, &pa, &c).unwrap();
        // regenerate the same noise from the same seed
        let mut replay = ChaCha8Rng::seed_from_u64(ch_seed);
        let gains: Vec<Complex64> = (0..4).map(|_| complex_gaussian(&mut replay, 1.0)).collect();
        assert_eq!(gains, ch.gains);
        let b = pa.private().sqrt();
        for k in 0..4 {
            let w = complex_gaussian(&mut replay, nv);
            let want = b * ch.gains[k] * enc.superposed[k] + w;
            worst = worst.max((residual[k] - want).norm());
        }
    }
    // equality up to floating-point rounding of the add/subtract pair
    verdict(
        5,
        "SIC identity",
        worst <= 1e-12,
        format!("1000 frames, max |residual - (sqrt(Pp) h.sum(priv) + w)| = {worst:.2e}"),
    );
}

#[test]
fn criterion_06_mpa_near_ml() {
    let cb = scma_6x4();
    let gains = vec![vec![Complex64::new(1.0, 0.0); 4]; 6];
    let nv = 0.068;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut e_ml, mut e_mpa, mut total) = (0u64, 0u64, 0u64);
    for _ in 0..10_000 {
        let s: Vec<usize> = (0..6).map(|_| rng.random_range(0..4)).collect();
        let x = scma_encode(&s, &cb).unwrap().superposed;
        let y: Vec<Complex64> = x.iter().map(|v| v + complex_gaussian(&mut rng, nv)).collect();
        let ml = ml_detect(&y, &cb, &gains, nv).unwrap();
        let mpa = mpa_detect(&y, &cb, &gains, nv, 10).unwrap();
        for j in 0..6 {
            total += 1;
            e_ml += u64::from(ml[j] != s[j]);
            e_mpa += u64::from(mpa[j].hard_decision() != s[j]);
        }
    }
    let (ser_ml, ser_mpa) = (e_ml as f64 / total as f64, e_mpa as f64 / total as f64);

    let mut recovered = 0;
    for _ in 0..1000 {
        let s: Vec<usize> = (0..6).map(|_| rng.random_range(0..4)).collect();
        let y = scma_encode(&s, &cb).unwrap().superposed;
        let post = mpa_detect(&y, &cb, &gains, 1e-9, 10).unwrap();
        recovered += usize::from(post.iter().map(|p| p.hard_decision()).eq(s.iter().copied()));
    }
    let near = (ser_mpa - ser_ml).abs() <= 0.01;
    let operating = (3e-3..3e-2).contains(&ser_ml);
    verdict(
        6,
        "MPA near ML",
        near && operating && recovered == 1000,
        format!(
            "sigma2={nv}: SER_ML={ser_ml:.4}, SER_MPA={ser_mpa:.4} over 10^4 vectors; noiseless {recovered}/1000"
        ),
    );
}

fn paired(mut rs: SimConfig, baseline: Scenario) -> (SimReport, SimReport) {
    rs.stop = StopRule {
        min_errors: 100,
        max_trials: 3000,
        batch: 128,
    };
    rs.seed = 77;
    let mut base = rs.clone();
    base.scenario = baseline;
    (run_sweep(&rs).unwrap(), run_sweep(&base).unwrap())
}

fn identical(a: &SimReport, b: &SimReport) -> bool {
    a.points.iter().zip(&b.points).all(|(x, y)| {
        x.trials == y.trials
            && x.totals == y.totals
            && x.noise_var.to_bits() == y.noise_var.to_bits()
            && x.ser.to_bits() == y.ser.to_bits()
            && x.ber.to_bits() == y.ber.to_bits()
    })
}

#[test]
fn criterion_07_reductions() {
    let mut cfg = SimConfig::new(Scenario::UncodedRsScma, vec![0.0, 5.0, 10.0]);
    cfg.symbols_per_user = 4;
    cfg.alpha = 0.0;
    let (rs0, scma) = paired(cfg.clone(), Scenario::ScmaBaseline);
    cfg.alpha = 1.0;
    let (rs1, qpsk) = paired(cfg, Scenario::QpskBaseline);
    let (a, b) = (identical(&rs0, &scma), identical(&rs1, &qpsk));
    let sers = |r: &SimReport| r.points.iter().map(|p| format!("{:.3e}", p.ser)).collect::<Vec<_>>();
    verdict(
        7,
        "reduction equivalences",
        a && b,
        format!(
            "alpha=0 vs SCMA identical={a} (SER {:?}); alpha=1 vs QPSK identical={b} (SER {:?})",
            sers(&rs0),
            sers(&rs1)
        ),
    );
}

#[test]
fn criterion_08_soft_beats_hard_sic() {
    let mut cfg = SimConfig::new(Scenario::UncodedRsScma, vec![15.0]);
    cfg.alpha = 0.5;
    cfg.symbols_per_user = 2;
    cfg.channel = ChannelKind::Rayleigh;
    cfg.seed = 8;
    cfg.stop = StopRule {
        min_errors: u64::MAX,
        max_trials: 100_000,
        batch: 1000,
    };
    cfg.sic = rsscma::receivers::SicMode::Soft;
    let soft = run_sweep(&cfg).unwrap().points.remove(0);
    cfg.sic = rsscma::receivers::SicMode::Hard;
    let hard = run_sweep(&cfg).unwrap().points.remove(0);
    verdict(
        8,
        "soft SIC <= hard SIC",
        soft.trials >= 100_000 && soft.trials == hard.trials && soft.ser <= hard.ser,
        format!(
            "15 dB Rayleigh alpha=0.5, {} paired frames: SER soft {:.4e} ({} err), hard {:.4e} ({} err)",
            soft.trials, soft.ser, soft.totals.symbol_errors, hard.ser, hard.totals.symbol_errors
        ),
    );
}

fn coded(ebn0: Vec<f64>, receiver: ReceiverKind, frames: u64) -> SimReport {
    let mut cfg = SimConfig::new(Scenario::CodedRsScma, ebn0);
    cfg.ldpc = Some(LdpcConfig {
        common: "builtin:peg-256-120".into(),
        private: "builtin:peg-256-120".into(),
        common_rate: Some(0.468),
        private_rate: Some(0.468),
    });
    cfg.channel = ChannelKind::Rayleigh;
    cfg.receiver = receiver;
    cfg.seed = 9;
    cfg.stop = StopRule {
        min_errors: u64::MAX,
        max_trials: frames,
        batch: 64,
    };
    run_sweep(&cfg).unwrap()
}

/// Eb/N0 at which a BLER curve crosses `target`, interpolating log10(BLER) linearly.
fn crossing(points: &[PointResult], target: f64) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        if a.bler >= target && b.bler < target && b.bler > 0.0 {
            let (la, lb, lt) = (a.bler.log10(), b.bler.log10(), target.log10());
            Some(a.ebn0_db + (la - lt) / (la - lb) * (b.ebn0_db - a.ebn0_db))
        } else if a.bler >= target && b.bler == 0.0 {
            Some(b.ebn0_db)
        } else {
            None
        }
    })
}

#[test]
fn criterion_09_rx2_beats_rx1() {
    // 1667 frames x 6 users >= 10^4 user blocks
    let rx1 = coded(vec![12.0], ReceiverKind::Rx1, 1667).points.remove(0);
    let rx2 = coded(vec![12.0], ReceiverKind::Rx2, 1667).points.remove(0);

    let grid = vec![14.0, 15.0, 16.0, 17.0, 18.0];
    let c1 = coded(grid.clone(), ReceiverKind::Rx1, 60);
    let c2 = coded(grid, ReceiverKind::Rx2, 60);
    let curve = |r: &SimReport| {
        r.points
            .iter()
            .map(|p| format!("{}:{:.3}", p.ebn0_db, p.bler))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let gain = match (crossing(&c1.points, 0.1), crossing(&c2.points, 0.1)) {
        (Some(a), Some(b)) => format!("{:.3} dB at BLER 0.1", a - b),
        _ => "n/a".into(),
    };
    println!("criterion  9 curves: Rx-1 [{}], Rx-2 [{}]", curve(&c1), curve(&c2));
    verdict(
        9,
        "Rx-2 BLER <= Rx-1 BLER",
        rx1.totals.blocks >= 10_000 && rx2.totals.blocks == rx1.totals.blocks && rx2.bler <= rx1.bler,
        format!(
            "12 dB Rayleigh r=120/256, {} user blocks: BLER Rx-1 {:.4}, Rx-2 {:.4}; measured Rx-2 gain {gain}",
            rx1.totals.blocks, rx1.bler, rx2.bler
        ),
    );
}

#[test]
fn criterion_10_ldpc_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let codes = ["peg-256-83", "peg-256-120", "peg-256-161"].map(|n| ParityCheckMatrix::builtin(n).unwrap());
    let mut bad_syndromes = 0;
    for i in 0..10_000 {
        let h = &codes[i % 3];
        let u: Vec<u8> = (0..h.k()).map(|_| rng.random_range(0..2)).collect();
        bad_syndromes += usize::from(!h.syndrome_check(&h.encode(&u).unwrap()).unwrap());
    }
    let ham = ParityCheckMatrix::builtin("hamming-7-4").unwrap();
    let c = ham.encode(&[1, 0, 1, 1]).unwrap();
    let corrected = (0..7)
        .filter(|&pos| {
            let mut llr: Vec<f64> = c.iter().map(|&b| if b == 0 { 2.0 } else { -2.0 }).collect();
            llr[pos] = -llr[pos] * 0.5;
            bp_decode(&llr, &ham, 50).unwrap().hard == c
        })
        .count();
    let fixed = codes.iter().chain([&ham]).all(|h| {
        let u: Vec<u8> = (0..h.k()).map(|_| rng.random_range(0..2)).collect();
        let c = h.encode(&u).unwrap();
        let llr: Vec<f64> = c.iter().map(|&b| if b == 0 { LLR_MAX } else { -LLR_MAX }).collect();
        let out = bp_decode(&llr, h, 50).unwrap();
        out.converged && out.iterations == 1 && out.hard == c
    });
    verdict(
        10,
        "LDPC codec",
        bad_syndromes == 0 && corrected == 7 && fixed,
        format!("nonzero syndromes {bad_syndromes}/10^4, Hamming corrections {corrected}/7, fixed point {fixed}"),
    );
}

#[test]
fn criterion_11_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut configs = Vec::new();
    let mut rs = SimConfig::new(Scenario::UncodedRsScma, vec![0.0, 8.0]);
    rs.alpha = 0.25;
    rs.symbols_per_user = 4;
    configs.push(rs);
    configs.push(SimConfig::new(Scenario::ScmaBaseline, vec![4.0]));
    let mut qp = SimConfig::new(Scenario::QpskBaseline, vec![4.0]);
    qp.channel = ChannelKind::Awgn;
    configs.push(qp);
    let mut cd = SimConfig::new(Scenario::CodedRsScma, vec![16.0]);
    cd.ldpc = Some(LdpcConfig {
        common: "builtin:peg-256-120".into(),
        private: "builtin:peg-256-120".into(),
        common_rate: None,
        private_rate: None,
    });
    cd.receiver = ReceiverKind::Rx2;
    cd.stop.max_trials = 6;
    cd.stop.batch = 4;
    configs.push(cd);

    let mut all_same = true;
    for (i, cfg) in configs.iter_mut().enumerate() {
        cfg.seed = 11;
        cfg.stop.min_errors = 50;
        cfg.stop.max_trials = cfg.stop.max_trials.min(2000);
        let mut files = Vec::new();
        for (run, threads) in [1, 4, 1, 3].into_iter().enumerate() {
            let path = dir.path().join(format!("{i}-{run}.csv"));
            let report = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_sweep(cfg).unwrap());
            emit_csv(&report, &path).unwrap();
            files.push(std::fs::read(&path).unwrap());
        }
        all_same &= files.windows(2).all(|w| w[0] == w[1]);
    }
    verdict(
        11,
        "determinism",
        all_same,
        format!("{} configs x runs at 1/4/1/3 threads, byte-identical CSV: {all_same}", configs.len()),
    );
}

#[test]
fn criterion_12_monotone_ser() {
    let mut cfg = SimConfig::new(Scenario::UncodedRsScma, vec![0.0, 4.0, 8.0, 12.0]);
    cfg.alpha = 0.0;
    cfg.channel = ChannelKind::Awgn;
    cfg.seed = 12;
    cfg.stop = StopRule {
        min_errors: 100,
        max_trials: 10_000_000,
        batch: 512,
    };
    let r = run_sweep(&cfg).unwrap();
    let enough = r.points.iter().all(|p| p.totals.symbol_errors >= 100);
    let monotone = r.points.windows(2).all(|w| w[1].ser <= w[0].ser);
    verdict(
        12,
        "monotone SER",
        enough && monotone,
        r.points
            .iter()
            .map(|p| format!("{} dB: {:.3e} ({} err)", p.ebn0_db, p.ser, p.totals.symbol_errors))
            .collect::<Vec<_>>()
            .join(", "),
    );
}
