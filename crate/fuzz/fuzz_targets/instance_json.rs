#![no_main]

use libfuzzer_sys::fuzz_target;

use seqcol::io;

// Instance documents are the main untrusted input surface. Accepted
// documents must re-emit and re-parse to the same validated instance.
fuzz_target!(|data: &[u8]| {
    // Oversized inputs only stress the JSON allocator, not the validator.
    if data.len() > 1 << 16 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(inst) = io::parse_instance(text) else {
        return;
    };
    let doc = io::instance_document(
        &inst.graph,
        Some(&inst.order),
        inst.lists.as_ref(),
        inst.coloring.as_ref(),
        inst.marks.as_ref(),
        inst.palette,
    );
    let emitted = io::to_json(&doc);
    let reparsed = io::parse_instance(&emitted).expect("emitted documents parse");
    assert_eq!(reparsed.graph, inst.graph);
    assert_eq!(reparsed.lists, inst.lists);
    assert_eq!(reparsed.coloring, inst.coloring);
});
