//! Jacobi elliptic functions at the lemniscatic parameter m = -1.

use massgap::elliptic::{complete_k, Jacobi};

fn main() -> massgap::Result<()> {
    let k = complete_k(-1.0)?;
    println!("K(-1) = {:.16}", k.value());
    let j = Jacobi::minus_one();
    println!("{:>8} {:>20} {:>20} {:>20}", "u", "sn", "cn", "dn");
    for i in 0..=8 {
        let u = i as f64 * k.value() / 2.0;
        let v = j.eval(u);
        println!("{u:>8.4} {:>20.16} {:>20.16} {:>20.16}", v.sn, v.cn, v.dn);
    }
    Ok(())
}
