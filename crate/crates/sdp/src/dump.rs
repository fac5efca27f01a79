use serde_json::{json, Value};

use psc_matqi::linalg::CMat;

use crate::problem::SdpProblem;
use crate::sparse::SpMat;

fn dense(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect()))
            .collect(),
    )
}

fn sp(m: &SpMat) -> Value {
    dense(&m.to_dense())
}

/// Debug dump with every coefficient matrix written densely as [re, im] pairs.
pub fn dump_json(p: &SdpProblem) -> String {
    let lmis: Vec<Value> = p
        .lmis
        .iter()
        .map(|l| {
            json!({
                "name": l.name,
                "dim": l.expr.rows,
                "constant": sp(&l.expr.constant),
                "terms": l.expr.terms.iter().map(|(i, m)| json!({"var": i, "matrix": sp(m)})).collect::<Vec<_>>(),
            })
        })
        .collect();
    let cons: Vec<Value> = p
        .lin
        .iter()
        .map(|l| json!({"name": l.name, "cmp": l.cmp, "constant": l.expr.constant, "terms": l.expr.merged()}))
        .collect();
    let v = json!({
        "sense": p.sense,
        "nvars": p.nvars,
        "objective": {"constant": p.objective.constant, "terms": p.objective.merged()},
        "lmis": lmis,
        "constraints": cons,
    });
    serde_json::to_string_pretty(&v).expect("serializable")
}
