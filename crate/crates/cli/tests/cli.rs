use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn setshape(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setshape"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_file(cmd: &str, params: &[&str], input: &Path, output: &Path) -> Output {
    let mut args = vec![cmd];
    args.extend_from_slice(params);
    args.extend(["--in", input.to_str().unwrap(), "--out", output.to_str().unwrap()]);
    setshape(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn shape_files() {
    let dir = tempfile::tempdir().unwrap();
    let (inp, out) = (dir.path().join("in.txt"), dir.path().join("out.txt"));

    fs::write(&inp, "0\n1\n2\n").unwrap();
    let o = run_file("shape", &["--h", "3", "--N", "1", "--K", "1"], &inp, &out);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out).unwrap(), "00\n11\n22\n");

    fs::write(&inp, "01\n").unwrap();
    let o = run_file("shape", &["--h", "2", "--N", "2", "--K", "1"], &inp, &out);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out).unwrap(), "001\n");

    fs::write(&inp, "03\n").unwrap();
    let o = run_file("shape", &["--h", "3", "--N", "2", "--K", "1"], &inp, &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn shape_reports_wrong_length_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let (inp, out) = (dir.path().join("in.txt"), dir.path().join("out.txt"));
    fs::write(&inp, "01\n011\n").unwrap();
    let o = run_file("shape", &["--h", "2", "--N", "2"], &inp, &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn missing_input_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_file(
        "shape",
        &["--h", "2", "--N", "2"],
        &dir.path().join("absent.txt"),
        &dir.path().join("out.txt"),
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unshape_files() {
    let dir = tempfile::tempdir().unwrap();
    let (inp, out) = (dir.path().join("in.txt"), dir.path().join("out.txt"));

    fs::write(&inp, "11\n").unwrap();
    let o = run_file("unshape", &["--h", "3", "--N", "1", "--K", "1"], &inp, &out);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out).unwrap(), "1\n");

    fs::write(&inp, "100\n").unwrap();
    let o = run_file("unshape", &["--h", "2", "--N", "2", "--K", "1"], &inp, &out);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("DETECTED line 1"));

    fs::write(&inp, "").unwrap();
    let o = run_file("unshape", &["--h", "2", "--N", "2", "--K", "1"], &inp, &out);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out).unwrap(), "");
}

#[test]
fn file_round_trip_is_byte_exact() {
    let dir = tempfile::tempdir().unwrap();
    let (src, mid, back) = (
        dir.path().join("src.txt"),
        dir.path().join("mid.txt"),
        dir.path().join("back.txt"),
    );
    // Deterministic pseudo-random files.
    let mut state = 0x1234_5678_u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as usize
    };
    for h in 2..=3usize {
        for n in 1..=7usize {
            for k in 1..=2usize {
                let lines = 1 + next() % 40;
                let mut text = String::new();
                for _ in 0..lines {
                    for _ in 0..n {
                        text.push(char::from_digit((next() % h) as u32, 36).unwrap());
                    }
                    text.push('\n');
                }
                if next() % 2 == 0 {
                    text.pop();
                }
                fs::write(&src, &text).unwrap();
                let p = [h.to_string(), n.to_string(), k.to_string()];
                let params = ["--h", &p[0], "--N", &p[1], "--K", &p[2]];
                assert_eq!(run_file("shape", &params, &src, &mid).status.code(), Some(0));
                assert_eq!(run_file("unshape", &params, &mid, &back).status.code(), Some(0));
                assert_eq!(fs::read(&back).unwrap(), text.as_bytes());
            }
        }
    }
}

#[test]
fn check_reports_membership() {
    let dir = tempfile::tempdir().unwrap();
    let (inp, out) = (dir.path().join("in.txt"), dir.path().join("out.txt"));
    fs::write(&inp, "11\n01\n").unwrap();
    let o = run_file("check", &["--h", "3", "--N", "1"], &inp, &out);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        "line,sequence,member\n1,11,true\n2,01,false\n"
    );
}

#[test]
fn sweep_rows() {
    let o = setshape(&["sweep-delta", "--h", "3", "--N", "1..2", "--K", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "h,N,K,avg_NH0_X,avg_N2H0_Y,delta,sign\n\
         3,1,1,0.000000000,0.000000000,0.000000000,zero\n\
         3,2,1,1.333333333,1.836591668,-0.503258335,negative\n"
    );
    let o = setshape(&["sweep-delta", "--h", "2", "--N", "2", "--K", "1"]);
    assert!(stdout(&o).contains("2,2,1,1.000000000,1.377443751,-0.377443751,negative"));

    let o = setshape(&["sweep-delta", "--h", "", "--N", "1", "--K", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "h,N,K,avg_NH0_X,avg_N2H0_Y,delta,sign\n");

    let o = setshape(&["sweep-delta", "--h", "3", "--N", "30", "--class-budget", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("3,30,1,,,,error:budget-exceeded"));
}

#[test]
fn sweep_json() {
    let o = setshape(&["sweep-delta", "--h", "3", "--N", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["N"], 2);
    assert_eq!(v[0]["sign"], "negative");
    assert!((v[0]["delta"].as_f64().unwrap() + 0.503259).abs() < 1e-6);
}

#[test]
fn detect_commands() {
    let o = setshape(&["detect", "--h", "3", "--N", "1", "--K", "1", "--exact", "--weight", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "h,N,K,weight,detected_fraction,baseline_detected_fraction\n3,1,1,1,1.000000000,1.000000000\n"
    );

    let o = setshape(&["detect", "--h", "3", "--N", "2", "--p", "0", "--trials", "1000", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "h,N,K,p,trials,seed,clean,detected,undetected,detected_rate,undetected_rate\n\
         3,2,1,0,1000,4,1000,0,0,0.000000000,0.000000000\n"
    );

    let o = setshape(&["detect", "--h", "3", "--N", "8", "--exact", "--weight", "5"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn detect_is_deterministic() {
    let args = ["detect", "--h", "3", "--N", "4", "--p", "0.1", "--trials", "20000", "--seed", "11"];
    assert_eq!(setshape(&args).stdout, setshape(&args).stdout);
}

#[test]
fn huffman_exhaustive_table() {
    let o = setshape(&["huffman", "--h", "3", "--N", "5", "--K", "1", "--exact"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "h,N,K,mode,mean_bits_plain,mean_bits_shaped,mean_bits_plain_hdr,mean_bits_shaped_hdr");
    assert_eq!(lines.len(), 1 + 243 + 1);
    assert!(lines[1..244].iter().all(|l| l.starts_with("3,5,1,seq:")));
    assert_eq!(lines[244], "3,5,1,exhaustive,6.604938272,6.444444444,15.604938272,15.444444444");
}

#[test]
fn table_dump() {
    let o = setshape(&["table", "--h", "2", "--L", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3]["counts"], serde_json::json!([1, 2]));
    assert_eq!(rows[3]["cumulative"], "5");
    assert_eq!(rows[3]["size"], "3");
}
