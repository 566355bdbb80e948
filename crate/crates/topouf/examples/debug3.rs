use topouf::cluster::synd_val;
use topouf::peel::peel;
use topouf::{build_code, build_decoding_graph, compute_syndrome, Basis, CodeFamily, CodeSpec, PauliKind, PauliOp};

fn main() {
    let code = build_code(CodeSpec::new(CodeFamily::RotatedToric, 6).unwrap());
    let err = PauliOp::from_components(
        code.n(),
        [(0, PauliKind::Y), (1, PauliKind::Y), (6, PauliKind::Y)],
    );
    for basis in [Basis::XChecks, Basis::ZChecks] {
        let g = build_decoding_graph(&code, basis, 1);
        let syn = compute_syndrome(&code, &err, basis);
        let nontrivial: Vec<u32> = syn.iter_ones().map(|c| c as u32).collect();
        println!("{basis:?}: nontrivial = {nontrivial:?}");
        let cs = synd_val(&g, &[], &nontrivial, false).unwrap();
        println!("  rounds = {}", cs.growth_rounds);
        let mut grown = cs.grown_edges.clone();
        grown.sort_unstable();
        println!("  grown edges = {grown:?}");
        for &v in &nontrivial {
            println!(
                "  check {v}: root {} parity {} size {}",
                cs.cluster_of[v as usize],
                cs.parity[cs.cluster_of[v as usize] as usize],
                cs.size[cs.cluster_of[v as usize] as usize]
            );
        }
        match peel(&g, &cs.grown_edges, &nontrivial) {
            Ok(c) => println!("  peel ok: {c:?}"),
            Err(e) => println!("  peel ERR: {e}"),
        }
    }
}
