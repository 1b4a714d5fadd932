//! The built-in reference bundle: the free two-point-orbit cover on three
//! orbits, serialized in the bundle schema.

use serde_json::{json, Value};

use hopfglue_core::hopf::ComoduleAlgebra;
use hopfglue_core::instances::z2_free_cover;

use crate::report::{algebra_json, matrix_json, vector_json};

fn comodule_json(c: &ComoduleAlgebra) -> Value {
    let mut v = algebra_json(&c.alg);
    v.as_object_mut()
        .expect("algebra json is an object")
        .insert("coaction".into(), matrix_json(&c.coaction));
    v
}

pub fn e1_bundle_json() -> String {
    let inst = z2_free_cover(3).expect("reference instance builds");
    let mut hopf = algebra_json(&inst.hopf.alg);
    {
        let obj = hopf.as_object_mut().expect("object");
        obj.insert("comult".into(), matrix_json(&inst.hopf.comult));
        obj.insert("counit".into(), vector_json(&inst.hopf.counit));
        obj.insert("antipode".into(), matrix_json(&inst.hopf.antipode));
    }
    let connections: Vec<Value> = inst
        .piece_connections
        .iter()
        .map(|ell| {
            let tensors: Vec<Value> = ell
                .tensors
                .iter()
                .map(|terms| {
                    Value::Array(
                        terms
                            .iter()
                            .map(|(l, r)| json!([vector_json(l), vector_json(r)]))
                            .collect(),
                    )
                })
                .collect();
            json!({ "tensors": tensors })
        })
        .collect();
    let bundle = json!({
        "hopf": hopf,
        "source": comodule_json(&inst.total),
        "pieces": inst.pieces.iter().map(comodule_json).collect::<Vec<_>>(),
        "covering_maps": inst.maps.iter().map(|m| matrix_json(&m.matrix)).collect::<Vec<_>>(),
        "connections": connections,
        "grouplike": ["0", "1"],
        "options": { "cap": 4096 },
    });
    let mut text = serde_json::to_string_pretty(&bundle).expect("bundle serializes");
    text.push('\n');
    text
}
