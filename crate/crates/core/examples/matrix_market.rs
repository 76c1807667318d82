//! Write a problem directory, read it back, and round-trip a factor through Matrix Market.

use nare_adi::linalg::mm::{mm_write_dense, read_dense, read_sparse};
use nare_adi::{gen_heat, NareProblem};

fn main() -> nare_adi::Result<()> {
    let dir = std::env::temp_dir().join(format!("nare-mm-example-{}", std::process::id()));
    let p = gen_heat(8, 6, 2, 2, 3)?;
    p.save(&dir)?;
    let mut files: Vec<_> = std::fs::read_dir(&dir).expect("listing the problem directory").flatten().map(|e| e.file_name()).collect();
    files.sort();
    println!("wrote {files:?} to {}", dir.display());

    let q = NareProblem::load(&dir)?;
    println!("reloaded: n = {}, n̂ = {}, m = {}, p = {}", q.n(), q.nh(), q.m(), q.p());
    println!("A has {} stored entries", read_sparse(&dir.join("A.mtx"))?.nnz());
    println!("first lines of A.mtx:");
    for line in std::fs::read_to_string(dir.join("A.mtx")).expect("reading A.mtx").lines().take(4) {
        println!("  {line}");
    }

    let path = dir.join("B_copy.mtx");
    mm_write_dense(&path, p.b.as_ref())?;
    println!("dense round-trip exact: {}", read_dense(&path)? == p.b);
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}
