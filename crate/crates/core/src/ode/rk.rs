//! Dormand–Prince 5(4) stepping for scalar second-order equations
//! `ẍ = F(t, x, ẋ)`, with local error control and per-step state output.

use super::dense::State;
use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// 5th-order weights minus embedded 4th-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    /// Relative local error per step.
    pub tol: f64,
    /// Absolute local error per step.
    pub atol: f64,
    pub h_max: f64,
    pub h_init: f64,
}

/// Integrates from `start` to `t_end`, returning every accepted state
/// (including `start`). `guard` is called on each accepted state and may stop
/// the integration with an error.
pub fn integrate_second_order<R, G>(
    mut rhs: R,
    start: State,
    t_end: f64,
    ctl: StepControl,
    mut guard: G,
) -> Result<Vec<State>>
where
    R: FnMut(f64, f64, f64) -> f64,
    G: FnMut(&State) -> Result<()>,
{
    let dir = (t_end - start.t).signum();
    let mut out = vec![start];
    if t_end == start.t {
        return Ok(out);
    }
    let mut t = start.t;
    let mut y = [start.x, start.xd];
    let mut k = [[0.0; 2]; 7];
    k[0] = [start.xd, start.xdd];
    let mut h = dir * ctl.h_init.abs().min(ctl.h_max).min((t_end - t).abs());
    let h_min = 1e-14 * (1.0 + t.abs().max(t_end.abs()));

    while (t_end - t) * dir > 0.0 {
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    ys[0] += h * a * kj[0];
                    ys[1] += h * a * kj[1];
                }
            }
            let ts = t + C[s] * h;
            k[s] = [ys[1], rhs(ts, ys[0], ys[1])];
        }
        // the 7th stage sits at the new point with the 5th-order solution
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            y_new[0] += h * A[6][j] * kj[0];
            y_new[1] += h * A[6][j] * kj[1];
        }
        let mut err = 0.0;
        for comp in 0..2 {
            let e: f64 = (0..7).map(|s| E[s] * k[s][comp]).sum::<f64>() * h;
            let sc = ctl.atol + ctl.tol * y[comp].abs().max(y_new[comp].abs());
            err += (e / sc).powi(2);
        }
        let err = (0.5 * err).sqrt();
        let finite = y_new.iter().all(|v| v.is_finite()) && k[6][1].is_finite() && err.is_finite();

        if finite && err <= 1.0 {
            t += h;
            y = y_new;
            k[0] = k[6];
            let state = State {
                t,
                x: y[0],
                xd: y[1],
                xdd: k[6][1],
            };
            guard(&state)?;
            out.push(state);
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = dir * (h.abs() * factor).min(ctl.h_max);
        } else {
            let factor = if finite {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.25
            };
            h *= factor;
            if h.abs() < h_min {
                return Err(Error::BlowUp {
                    t,
                    reason: "step size underflow".into(),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let start = State {
            t: 0.0,
            x: 1.0,
            xd: 0.0,
            xdd: -1.0,
        };
        let ctl = StepControl {
            tol: 1e-11,
            atol: 1e-11,
            h_max: 0.5,
            h_init: 0.01,
        };
        let states =
            integrate_second_order(|_, x, _| -x, start, 10.0, ctl, |_| Ok(())).unwrap();
        let last = states.last().unwrap();
        assert_eq!(last.t, 10.0);
        assert!((last.x - 10f64.cos()).abs() < 1e-8);
        assert!((last.xd + 10f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn backward_direction_and_guard() {
        let start = State {
            t: 0.0,
            x: 1.0,
            xd: 1.0,
            xdd: 1.0,
        };
        let ctl = StepControl {
            tol: 1e-10,
            atol: 1e-10,
            h_max: 0.1,
            h_init: 0.01,
        };
        let states =
            integrate_second_order(|_, x, _| x, start, -2.0, ctl, |_| Ok(())).unwrap();
        assert!(((states.last().unwrap().x) - (-2f64).exp()).abs() < 1e-9);
        let r = integrate_second_order(
            |_, x, _| x,
            start,
            -2.0,
            ctl,
            |s| {
                if s.t < -1.0 {
                    Err(Error::BlowUp {
                        t: s.t,
                        reason: "stop".into(),
                    })
                } else {
                    Ok(())
                }
            },
        );
        assert!(matches!(r, Err(Error::BlowUp { .. })));
    }
}
