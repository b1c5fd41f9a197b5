#![no_main]

use libfuzzer_sys::fuzz_target;
use sepmon::JobInput;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(job) = JobInput::parse(text) {
        let rep = &job.rep;
        assert_eq!(rep.weights().rows(), rep.torus_rank() + rep.torsion_orders().len());
        assert_eq!(rep.weights().cols(), rep.n());
        // the canonical rendering parses back to the same representation
        let again = JobInput::parse(&sepmon::cli::rep_to_json(rep).to_string()).expect("rendered job parses");
        assert_eq!(&again.rep, rep);
    }
});
