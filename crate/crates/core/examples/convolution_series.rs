//! Convolution series Σ a_j κ^{<j+1>} with certified truncation, and the
//! geometric series against its closed forms.

use gfc::convops::ConvConfig;
use gfc::kernels::KernelSpec;
use gfc::series::{geometric_oracle, ConvolutionSeries, ConvolutionSeriesSpec};

fn main() -> gfc::Result<()> {
    let cfg = ConvConfig::default();
    let kernels = [KernelSpec::ExtendedH1, KernelSpec::PowerLaw(0.5), KernelSpec::SumPowerLaw(vec![(1.0, 0.625), (1.0, 0.375)])];
    println!("{:<28} {:>5} {:>5} {:>22} {:>10} {:>6}", "kernel", "λ", "x", "value", "rel err", "terms");
    for kernel in &kernels {
        for lambda in [-0.5, 0.5, 1.0] {
            let series = ConvolutionSeries::new(ConvolutionSeriesSpec::geometric(kernel.clone(), lambda)?, &cfg)?;
            for x in [0.1, 1.0, 2.0] {
                let v = series.evaluate(x, 1e-14)?;
                let oracle = geometric_oracle(kernel, lambda, x)?;
                println!(
                    "{:<28} {lambda:>5} {x:>5} {:>22.15e} {:>10.1e} {:>6}",
                    kernel.to_string(),
                    v.value,
                    ((v.value - oracle) / oracle).abs(),
                    v.terms
                );
            }
        }
    }

    // partial sums against the majorant of the remaining tail
    let series = ConvolutionSeries::new(ConvolutionSeriesSpec::geometric(KernelSpec::PowerLaw(0.5), 1.0)?, &cfg)?;
    let x = 1.5;
    let exact = geometric_oracle(&KernelSpec::PowerLaw(0.5), 1.0, x)?;
    for j in [2, 5, 10, 20, 30] {
        let tail = (exact - series.partial_sum(j, x)?).abs();
        println!("J = {j:>2}: tail {tail:.3e} <= bound {:.3e}", series.tail_bound(j, x));
    }

    let explicit = ConvolutionSeries::new(ConvolutionSeriesSpec::explicit(KernelSpec::PowerLaw(0.5), vec![1.0, -1.0, 0.5])?, &cfg)?;
    println!("h_0.5 - h_1 + 0.5 h_1.5 at 1: {:.15}", explicit.evaluate(1.0, 1e-14)?.value);
    Ok(())
}
