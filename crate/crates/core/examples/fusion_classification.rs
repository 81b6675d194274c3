//! Classifies the subgroups of a Sylow 2-subgroup of S4 in F_S(S4).

use localities::catalog;
use localities::fusion::FusionSystem;

fn main() -> localities::Result<()> {
    let f = FusionSystem::from_group(&catalog::s4(), 2)?;
    println!("{}: |S| = {}, {} morphisms", f.name(), f.s().order(), f.morphism_count());
    println!("O_2(F) = {}", f.s().describe(f.o_p()));
    println!("Z(F) = {}", f.s().describe(f.center()));
    println!("{:<32} {:>5} {:>3} {:>3} {:>3} {:>3}", "P", "order", "f", "c", "cr", "s");
    let yn = |b: bool| if b { "y" } else { "-" };
    for p in f.subgroups() {
        let c = f.classify_subgroup(p);
        println!(
            "{:<32} {:>5} {:>3} {:>3} {:>3} {:>3}",
            f.s().describe(p),
            c.order,
            yn(c.fully_normalized),
            yn(c.centric),
            yn(c.centric_radical),
            yn(c.subcentric)
        );
    }
    Ok(())
}
