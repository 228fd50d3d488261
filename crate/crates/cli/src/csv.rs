//! Plain CSV with every float in `{:.16e}` (17 significant digits, lossless).

use mempart_core::engine::Trace;
use mempart_core::observables::{EntropyBase, ObservableRow};

pub const TRACE_HEADER: &str = "tau,abs_k1,abs_k2,abs_k12,abs_l12,\
re_k1,im_k1,re_k2,im_k2,re_k12,im_k12,re_l12,im_l12";

fn push_row(out: &mut String, values: impl IntoIterator<Item = f64>) {
    let cells: Vec<String> = values.into_iter().map(|v| format!("{v:.16e}")).collect();
    out.push_str(&cells.join(","));
    out.push('\n');
}

pub fn trace_csv(trace: &Trace) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for (tau, set) in trace.taus.iter().zip(&trace.sets) {
        let z = set.as_array();
        let mut row = vec![*tau];
        row.extend(set.magnitudes());
        row.extend(z.iter().flat_map(|c| [c.re, c.im]));
        push_row(&mut out, row);
    }
    out
}

pub fn observables_header(base: EntropyBase) -> String {
    let entropy = match base {
        EntropyBase::Bits => "entropy_bits",
        EntropyBase::Nats => "entropy_nats",
    };
    format!("tau,purity_total_norm,purity_1_norm,purity_2_norm,{entropy},trace_distance,fidelity")
}

pub fn observables_csv(rows: &[ObservableRow], base: EntropyBase) -> String {
    let mut out = observables_header(base);
    out.push('\n');
    for r in rows {
        push_row(
            &mut out,
            [
                r.tau,
                r.purity_total_norm,
                r.purity_1_norm,
                r.purity_2_norm,
                r.entropy,
                r.trace_distance,
                r.fidelity,
            ],
        );
    }
    out
}
