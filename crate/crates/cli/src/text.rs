//! Plain-text rendering of a report.

use std::fmt::Write;

use serde_json::Value;

fn table(out: &mut String, rows: &Value) {
    for row in rows.as_array().into_iter().flatten() {
        let cells: Vec<String> = row.as_array().into_iter().flatten().map(|c| format!("{c:>3}")).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
}

fn list(v: &Value) -> String {
    v.as_array().into_iter().flatten().map(|x| x.to_string().trim_matches('"').to_string()).collect::<Vec<_>>().join(", ")
}

fn scalars(out: &mut String, section: &Value, keys: &[&str]) {
    for k in keys {
        if let Some(x) = section.get(*k) {
            let _ = writeln!(out, "  {k}: {}", match x {
                Value::Array(_) => format!("[{}]", list(x)),
                Value::String(t) => t.clone(),
                _ => x.to_string(),
            });
        }
    }
}

pub fn render(r: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} on {} over {} (degree cap {})",
        r["command"].as_str().unwrap_or("?"),
        r["scenario"].as_str().unwrap_or("?"),
        r["field"].as_str().unwrap_or("?"),
        r["degree_cap"]
    );
    let _ = writeln!(out, "modules: {}", list(&r["modules"]));
    if let Some(t) = r.get("ext1_dims") {
        let _ = writeln!(out, "Ext^1 dimensions:");
        table(&mut out, t);
    }
    if let Some(h) = r.get("hull") {
        let _ = writeln!(out, "hull:");
        let arrows: Vec<String> = h["arrows"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|a| format!("{}: {} -> {}", a["name"].as_str().unwrap_or(""), a["src"], a["dst"]))
            .collect();
        let _ = writeln!(out, "  arrows: {}", arrows.join(", "));
        for rel in h["relations"].as_array().into_iter().flatten() {
            let _ = writeln!(out, "  {} = {}", rel["name"].as_str().unwrap_or(""), rel["poly"].as_str().unwrap_or(""));
            for (level, p) in rel["history"].as_object().into_iter().flatten() {
                let _ = writeln!(out, "    after degree {level}: {}", p.as_str().unwrap_or(""));
            }
        }
        scalars(&mut out, h, &["graded_dims", "dim", "top_degree", "stabilized"]);
    }
    if let Some(o) = r.get("observables") {
        let _ = writeln!(out, "observables:");
        scalars(&mut out, o, &["dim_a", "dim_o", "ker_dim", "im_dim", "end_dims", "classical_surjective", "gbt_verdict", "exact"]);
    }
    if let Some(b) = r.get("burnside") {
        let _ = writeln!(out, "burnside:");
        scalars(&mut out, b, &["eta_injective", "eta_surjective", "gr0_iso", "gr1_iso", "dim_j_mod_j2", "dim_o1"]);
        for c in b["certificates"].as_array().into_iter().flatten() {
            let _ = writeln!(out, "  simplicity: {} (End dim {})", c["verdict"].as_str().unwrap_or(""), c["end_dim"]);
        }
    }
    let sf = r.get("standard_form").or_else(|| r.get("burnside").and_then(|b| b.get("standard_form")));
    if let Some(s) = sf {
        let _ = writeln!(out, "standard form (full: {}):", s["full"]);
        for b in s["blocks"].as_array().into_iter().flatten() {
            let i = b["i"].as_u64().unwrap_or(0) + 1;
            let j = b["j"].as_u64().unwrap_or(0) + 1;
            let _ = writeln!(out, "  block ({i},{j}): {} of {}: {}", b["image_dim"], b["ambient_dim"], list(&b["basis"]));
        }
    }
    if let Some(c) = r.get("closure") {
        let _ = writeln!(out, "closure:");
        scalars(&mut out, c, &["dim_b", "dim_o_b", "eta_b_injective", "eta_b_surjective", "family_is_simple", "hull_graded_dims", "closure_hull_graded_dims"]);
    }
    if let Some(k) = r.get("kernel_chain") {
        let _ = writeln!(out, "kernel chain:");
        scalars(&mut out, k, &["dims", "final_dim", "final_basis", "complete_family", "exact"]);
    }
    if let Some(e) = r.get("extension") {
        let _ = writeln!(out, "extension of {}: {}", list(&e["chain"]), e["outcome"].as_str().unwrap_or(""));
        if let Some(o) = e.get("obstruction") {
            scalars(&mut out, o, &["order", "slot", "value", "value_defining_system", "cleared_by_top_adjustment"]);
        }
        if let Some(d) = e.get("module_dim") {
            let _ = writeln!(out, "  dim: {d}");
        }
        for (k, v) in e.get("action").and_then(Value::as_object).into_iter().flatten() {
            let _ = writeln!(out, "  {k} acts by {}", v.as_str().unwrap_or(""));
        }
        for (k, v) in e.get("psi").and_then(Value::as_object).into_iter().flatten() {
            let alpha = e["alpha"][k].as_str().unwrap_or("");
            let _ = writeln!(out, "  psi[{k}] = {} | alpha[{k}] = {alpha}", v.as_str().unwrap_or(""));
        }
        if let Some(a) = e.get("annihilation") {
            scalars(&mut out, a, &["k_dim", "annihilates", "modules_killed", "cochains_killed"]);
        }
    }
    out
}
