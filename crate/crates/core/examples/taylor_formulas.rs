//! Convolution Taylor formulas: coefficient extraction, polynomial and
//! remainder, the mean-value bracket, and the classical limit.

use gfc::convops::ConvConfig;
use gfc::grammar::parse_function;
use gfc::kernels::{KernelSpec, SoninePair};
use gfc::taylor::{caputo_taylor_series_with, extract_coefficients_with, mean_value_bracket_for, TaylorExpansion, TaylorVariant};

fn main() -> gfc::Result<()> {
    let cfg = ConvConfig::default();

    // l_{κ,λ} = Σ λ^j κ^{<j+1>} has coefficients λ^j
    for kappa in [KernelSpec::PowerLaw(0.5), KernelSpec::SumPowerLaw(vec![(1.0, 0.625), (1.0, 0.375)])] {
        let pair = SoninePair::from_catalog(kappa.clone())?;
        let f = parse_function("geom:0.5")?.build(Some(&kappa), &cfg)?;
        let (a, _) = extract_coefficients_with(&f, &pair, 4, &cfg)?;
        println!("{kappa}: a = {a:.10?}");
    }

    let pair = SoninePair::power(0.5)?;
    let f = parse_function("exp:1")?.build(None, &cfg)?;
    for variant in [TaylorVariant::Rl, TaylorVariant::Caputo] {
        let t = TaylorExpansion::build(&f, &pair, 3, variant, &cfg)?;
        println!("{variant:?} n=3, coefficients {:.10?}", t.coeffs);
        for x in [0.25, 1.0, 2.0] {
            let b = mean_value_bracket_for(&t, x, 200, &cfg)?;
            println!(
                "  x={x}: poly {:.10} remainder {:.3e}  ratio {:.6} in [{:.6}, {:.6}]",
                t.poly(x)?,
                t.remainder(x)?,
                b.ratio,
                b.lo,
                b.hi
            );
        }
    }

    // (h_1, h_0) gives back the classical Taylor polynomial
    let t = TaylorExpansion::build(&f, &SoninePair::extended(), 4, TaylorVariant::Caputo, &cfg)?;
    println!("classical cubic at 0.5: poly {:.9}, remainder {:.9}", t.poly(0.5)?, t.remainder(0.5)?);
    let s = caputo_taylor_series_with(&f, &SoninePair::extended(), 1.0, 30, 1e-14, &cfg)?;
    println!("Taylor series of e^x at 1 with {} terms: {:.15}", s.coeffs.len(), s.value);
    Ok(())
}
