use affinekit::exact::snf::*;
fn main() {
    // trial 2 matrix from the xorshift sweep
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state << 13; state ^= state >> 7; state ^= state << 17; state
    };
    let mut m = IMat::zeros(0,0);
    for trial in 0..3 {
        let rows = 1 + (next() % 8) as usize;
        let cols = 1 + (next() % 8) as usize;
        m = IMat::from_rows(
            &(0..rows).map(|_| (0..cols).map(|_| (next() % 19) as i64 - 9).collect::<Vec<_>>()).collect::<Vec<_>>(),
        );
        let _ = trial;
    }
    eprintln!("{:?}", m);
    let snf = smith_normal_form(&m);
    eprintln!("diag {:?}", snf.diagonal().iter().map(|x| x.to_string()).collect::<Vec<_>>());
}
