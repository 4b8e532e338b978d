use reflhilb::catalog::{get_case, CaseName};
use reflhilb::poly::act;

fn main() {
    let case = get_case(CaseName::G12, None).unwrap();
    let (name, sigma) = &case.gens_h[0];
    println!("gen {} = {}", name, sigma.render());
    println!("f1 = {}", case.f[0].render());
    let img = act(sigma, &case.f[0]);
    println!("sigma(f1) = {}", img.render());
    let tau = &case.gens_h[1].1;
    println!("tau(f1) = {}", act(tau, &case.f[0]).render());
    let mu = &case.gens_h[2].1;
    println!("mu = {}", mu.render());
    println!("mu(f1) = {}", act(mu, &case.f[0]).render());
}
