//! A Runge-Kutta tableau read from text (Kutta's 3/8 rule) and its observed
//! order on `y' = -y + cos t`.

use swfem::time_integration::{run, ButcherTableau, OdeRhs, RunOptions};

const THREE_EIGHTHS: &str = "
# Kutta's 3/8 rule
order 4
1/3
-1/3 1
1 -1 1
1/8 3/8 3/8 1/8
0 1/3 2/3 1
";

struct Forced;

impl OdeRhs for Forced {
    fn dim(&self) -> usize {
        1
    }
    fn eval(&self, t: f64, y: &[f64], dydt: &mut [f64]) -> swfem::Result<()> {
        dydt[0] = -y[0] + t.cos();
        Ok(())
    }
}

fn main() -> swfem::Result<()> {
    let tab = ButcherTableau::from_text("3/8", THREE_EIGHTHS)?;
    // y(0) = 0 gives y = (cos t + sin t - e^{-t}) / 2
    let exact = |t: f64| 0.5 * (t.cos() + t.sin() - (-t).exp());
    let mut prev = None;
    for steps in [10, 20, 40, 80] {
        let dt = 2.0 / steps as f64;
        let opts = RunOptions { t0: 0.0, t_end: 2.0, dt, snapshots: vec![], steady: None };
        let out = run(&Forced, &tab, vec![0.0], &opts, &mut |_| {})?;
        let e = (out.y[0] - exact(2.0)).abs();
        let rate = prev.map(|p: f64| (p / e).log2());
        println!("{} steps  error {e:.3e}  order {}", out.steps, rate.map_or("-".into(), |r| format!("{r:.2}")));
        prev = Some(e);
    }
    println!("nominal order {}, stages {}", tab.order(), tab.stages());
    Ok(())
}
