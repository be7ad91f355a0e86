use su2twist::reconstruct::TensorBasisElement;
use su2twist::twist::*;

fn show(label: &str, t: &TensorBasisElement) {
    println!("{label}: {t}");
}

fn main() {
    let exp = twist_reconstruct(3, TwistPath::Direct, TwistConfig::default()).unwrap();
    for k in 0..=3 {
        show(&format!("F{k}"), exp.at(k));
    }
    println!("parity: {}", verify_parity(&exp));
}
