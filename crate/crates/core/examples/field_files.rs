//! Write a wave function to the text field format and read it back.

use liouspace::fieldfile::FieldFile;
use liouspace::schrodinger_like::{psi_gaussian_gauged, GaugePhase};
use liouspace::{Result, UniformGrid1D, WaveFunctionField};

pub fn run() -> Result<()> {
    let phase = GaugePhase::default();
    let xgrid = UniformGrid1D::new(-4.0, 4.0, 9)?;
    let psi = WaveFunctionField::from_fn(xgrid, 1.0, |x| psi_gaussian_gauged(x, 1.0, &phase))?;

    let path = std::env::temp_dir().join(format!("liouspace-example-{}.csv", std::process::id()));
    let file = FieldFile::WaveFunction(psi.clone());
    file.write(&path)?;
    let text = std::fs::read_to_string(&path)?;
    print!("{text}");

    let back = FieldFile::read(&path)?;
    std::fs::remove_file(&path)?;
    println!("identical after re-read: {}", back.render() == text);
    if let FieldFile::WaveFunction(w) = back {
        println!("bitwise equal values: {}", w.values.iter().zip(&psi.values).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
