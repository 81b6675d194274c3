//! Catalog groups: Sylow subgroups, O_p and characteristic p.

use localities::catalog;

fn main() {
    println!("{:<4} {:>5} {:>8} {:>8} {:>6} {:>6}", "G", "|G|", "|Syl_2|", "|O_2|", "char2", "char3");
    for g in catalog::all() {
        let sylow = if g.order() % 2 == 0 { g.sylow(2).order() } else { 1 };
        println!(
            "{:<4} {:>5} {:>8} {:>8} {:>6} {:>6}",
            g.name(),
            g.order(),
            sylow,
            g.o_p(2).order(),
            g.is_characteristic_p(2),
            g.is_characteristic_p(3)
        );
    }
    let s4 = catalog::s4();
    let v4 = s4.o_p(2);
    println!("O_2(S4) = {:?}", v4.labels());
    println!("subgroups of S4: {}", s4.all_subgroups().len());
}
