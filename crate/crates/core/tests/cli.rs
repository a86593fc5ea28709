use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn vibcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vibcs")).args(args).output().expect("spawn vibcs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn synth_compress_reconstruct_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("sig.csv");
    let csvb = dir.path().join("sig.csvb");
    let rec = dir.path().join("rec.csv");
    let report = dir.path().join("eval.csv");

    let o = vibcs(&[
        "synth", "--tones", "330:1:0,990:0.3:1", "--fs", "10240", "--len", "2500", "--noise-db", "-40",
        "--synth-seed", "3", "--out", p(&sig),
    ]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(fs::read_to_string(&sig).unwrap().lines().count(), 2500);

    let o = vibcs(&[
        "compress", "--input", p(&sig), "--basis", "dft", "--matrix", "wang", "--cr", "25", "--seed", "9",
        "--n", "1024", "--out", p(&csvb),
    ]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("m=256 n=1024 cr=25% segments=3"), "{}", stdout(&o));
    let bytes = fs::read(&csvb).unwrap();
    assert_eq!(&bytes[..4], b"CSVB");
    assert_eq!(bytes.len(), 36 + 4 * 256 + 3 * (4 + 8 * 256));

    let o = vibcs(&["reconstruct", "--input", p(&csvb), "--out", p(&rec)]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(stdout(&o).lines().count(), 3);
    assert_eq!(fs::read_to_string(&rec).unwrap().lines().count(), 2500);

    let o = vibcs(&[
        "evaluate", "--original", p(&sig), "--reconstructed", p(&rec), "--n", "1024", "--out", p(&report),
    ]);
    assert!(o.status.success(), "{o:?}");
    let text = fs::read_to_string(&report).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "segment,snr_db,rms_original,rms_reconstructed,kurtosis_original,kurtosis_reconstructed"
    );
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("all,"));
    let snr: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!(snr > 15.0, "snr {snr}");
}

#[test]
fn sweep_report_is_reproducible_and_untimed() {
    let args = [
        "sweep", "--tones", "330:1:0", "--fs", "10240", "--len", "1024", "--noise-db", "-30", "--basis", "dft,dct",
        "--matrix", "gaussian,wang", "--cr", "5,10", "--seed", "0..2", "--n", "1024",
    ];
    let a = vibcs(&args);
    let b = vibcs(&[&args[..], &["--sequential"]].concat());
    assert!(a.status.success(), "{a:?}");
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "basis,matrix,cr_percent,m,seed,snr_db,iterations_mean,wall_ms");
    assert_eq!(lines.len(), 1 + 2 * 2 * 2 * 2);
    assert!(lines[1..].iter().all(|l| l.ends_with(",NA")));
    assert!(lines[1].starts_with("dft,gaussian,5,51,0,"), "{}", lines[1]);

    let timed = stdout(&vibcs(&[&args[..], &["--timing"]].concat()));
    assert!(timed.lines().skip(1).all(|l| !l.ends_with(",NA")));
}

#[test]
fn coherence_report() {
    let o = vibcs(&["coherence", "--basis", "dft", "--matrix", "wang,gaussian", "--n", "64", "--m", "16", "--seed", "1,2"]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "basis,matrix,n,m,seed,coherence,expected");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("dft,wang,64,16,1,1.0"), "{}", lines[1]);
}

#[test]
fn sparsity_report() {
    let o = vibcs(&[
        "sparsity", "--tones", "100:1:0", "--fs", "1024", "--len", "2048", "--basis", "dft,db2", "--n", "1024",
    ]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "basis,n,segments,threshold,sparsity_mean");
    // A bin-centred tone occupies two of 1024 DFT bins.
    assert!(lines[1].starts_with("dft,1024,2,0.01,0.998047"), "{}", lines[1]);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# coherence defaults\nbasis = dct\nmatrix = wang\nn = 64\nm = 8\nseed = 0\n").unwrap();
    let from_file = stdout(&vibcs(&["--config", p(&cfg), "coherence"]));
    assert!(from_file.lines().nth(1).unwrap().starts_with("dct,wang,64,8,0,"));
    let overridden = stdout(&vibcs(&["--config", p(&cfg), "coherence", "--basis", "dft"]));
    assert!(overridden.lines().nth(1).unwrap().starts_with("dft,wang,64,8,0,"));
}

#[test]
fn failures_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    let code = |args: &[&str]| vibcs(args).status.code().unwrap();

    assert_eq!(code(&["bogus-command"]), 2);
    assert_eq!(
        code(&["compress", "--input", p(&missing), "--basis", "dct", "--matrix", "wang", "--cr", "10", "--out", "x"]),
        1
    );

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "1.0\n2.0\nabc\n").unwrap();
    let out = dir.path().join("o.csvb");
    let o = vibcs(&["compress", "--input", p(&bad), "--basis", "dct", "--matrix", "wang", "--cr", "10", "--n", "4", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let good = dir.path().join("good.csv");
    fs::write(&good, "1\n2\n3\n4\n").unwrap();
    assert_eq!(
        code(&["compress", "--input", p(&good), "--basis", "haar", "--matrix", "wang", "--cr", "10", "--out", p(&out)]),
        4
    );
    assert_eq!(
        code(&["compress", "--input", p(&good), "--basis", "db2", "--matrix", "wang", "--cr", "50", "--n", "6", "--out", p(&out)]),
        4
    );

    let junk = dir.path().join("junk.csvb");
    fs::write(&junk, b"NOPE and more bytes than a header needs......").unwrap();
    assert_eq!(code(&["reconstruct", "--input", p(&junk), "--out", p(&dir.path().join("r.csv"))]), 5);
}

fn synth_file(dir: &Path, name: &str, extra: &[&str]) -> std::path::PathBuf {
    let out = dir.join(name);
    let o = vibcs(&[&["synth", "--fs", "10240", "--out", p(&out)][..], extra].concat());
    assert!(o.status.success(), "{o:?}");
    out
}

#[test]
fn full_rate_wang_is_lossless_for_every_basis() {
    let dir = tempfile::tempdir().unwrap();
    let sig = synth_file(dir.path(), "s.csv", &["--tones", "333:1:0.2", "--len", "1500", "--noise-db", "-20"]);
    for basis in ["dct", "dft", "db2", "db8"] {
        let csvb = dir.path().join(format!("{basis}.csvb"));
        let rec = dir.path().join(format!("{basis}.csv"));
        assert!(vibcs(&["compress", "--input", p(&sig), "--basis", basis, "--matrix", "wang", "--cr", "100", "--n", "256", "--out", p(&csvb)]).status.success());
        assert!(vibcs(&["reconstruct", "--input", p(&csvb), "--out", p(&rec)]).status.success());
        let report = stdout(&vibcs(&["evaluate", "--original", p(&sig), "--reconstructed", p(&rec)]));
        assert!(report.lines().nth(1).unwrap().starts_with("all,inf,"), "{basis}: {report}");
    }
}

#[test]
fn evaluate_sentinels() {
    let dir = tempfile::tempdir().unwrap();
    let sig = synth_file(dir.path(), "s.csv", &["--tones", "100:1:0", "--len", "64"]);
    let zeros = dir.path().join("z.csv");
    fs::write(&zeros, "0\n".repeat(64)).unwrap();
    let same = stdout(&vibcs(&["evaluate", "--original", p(&sig), "--reconstructed", p(&sig)]));
    assert!(same.lines().nth(1).unwrap().starts_with("all,inf,"));
    let zero = stdout(&vibcs(&["evaluate", "--original", p(&sig), "--reconstructed", p(&zeros)]));
    let snr: f64 = zero.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(snr, 0.0);
}

#[test]
fn empty_signal_round_trips_to_empty_output() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "# no samples\n").unwrap();
    let csvb = dir.path().join("e.csvb");
    let rec = dir.path().join("e.csv");
    let o = vibcs(&["compress", "--input", p(&empty), "--basis", "dct", "--matrix", "gaussian", "--cr", "10", "--out", p(&csvb)]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(fs::read(&csvb).unwrap().len(), 36);
    assert!(vibcs(&["reconstruct", "--input", p(&csvb), "--out", p(&rec)]).status.success());
    assert_eq!(fs::read_to_string(&rec).unwrap(), "");
}

#[test]
fn corrupted_wang_container_is_an_integrity_error() {
    let dir = tempfile::tempdir().unwrap();
    let sig = synth_file(dir.path(), "s.csv", &["--tones", "100:1:0", "--len", "256"]);
    let csvb = dir.path().join("w.csvb");
    assert!(vibcs(&["compress", "--input", p(&sig), "--basis", "dct", "--matrix", "wang", "--cr", "25", "--n", "256", "--out", p(&csvb)]).status.success());
    let mut bytes = fs::read(&csvb).unwrap();
    bytes[16] ^= 0x01; // seed no longer reproduces the stored indices
    fs::write(&csvb, &bytes).unwrap();
    let o = vibcs(&["reconstruct", "--input", p(&csvb), "--out", p(&dir.path().join("r.csv"))]);
    assert_eq!(o.status.code(), Some(6));
}

#[test]
fn synth_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let flags = ["--tones", "330:1:0,346:0.5:0", "--len", "6000", "--noise-db", "-25", "--synth-seed", "42"];
    let a = synth_file(dir.path(), "a.csv", &flags);
    let b = synth_file(dir.path(), "b.csv", &flags);
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn tone_mixture_is_sparser_in_fourier_bases_than_db2() {
    let o = vibcs(&[
        "sparsity", "--tones", "330:1:0,346:0.5:1,990:0.3:2", "--fs", "10240", "--len", "4096", "--noise-db", "-40",
        "--basis", "dct,dft,db2", "--n", "1024",
    ]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    let value = |basis: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(&format!("{basis},"))).unwrap();
        line.rsplit(',').next().unwrap().parse().unwrap()
    };
    assert!(value("dct") > value("db2"), "{text}");
    assert!(value("dft") > value("db2"), "{text}");
}
