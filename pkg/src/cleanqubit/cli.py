"""Command-line surface: instance generation, protocol runs, verification
suites, wire sessions, and benchmark sweeps.

Single runs print line-oriented ``key=value`` reports; sweeps write CSV.
Exit codes: 0 success / all checks pass, 1 verification or generation
failure, 2 usage error, 3 I/O or transport error.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass

from . import circuits, instances, netsim, protocols, su2
from .config import DEFAULT_MC_SAMPLES, DEFAULT_TOL
from .linalg import RngStream

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3

_GEN_MODES = {
    "exact-yes": (instances.Mode.EXACT_INVERSE, instances.gen_yes),
    "perturbed-yes": (instances.Mode.PERTURBED, instances.gen_yes),
    "no": (instances.Mode.HAAR_NO, None),
    "random": (instances.Mode.HAAR_NO, None),
}


@dataclass
class RunConfig:
    n: int = 64
    seed: int = 0
    samples: int = 1000
    reps: int = 1
    threshold: float | None = None
    epsilon: float = 0.3
    mode: str = "exact-yes"
    protocol: str = "dqc1"
    oracle: bool = False
    workers: int = 1
    out: str | None = None
    max_n: int = 64
    tolerance: float = DEFAULT_TOL.mc_check
    instance_file: str | None = None
    suite: str = "all"
    driver: bool = False
    role: str | None = None
    connect: str | None = None
    listen: int | None = None


def _emit(lines, out=None):
    text = "\n".join(f"{k}={v}" for k, v in lines)
    print(text)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _load_or_generate(cfg: RunConfig) -> instances.AbcdInstance:
    if cfg.instance_file:
        return instances.load_instance(cfg.instance_file)
    rng = RngStream(cfg.seed)
    if cfg.mode == "exact-yes":
        return instances.gen_yes(cfg.n, instances.Mode.EXACT_INVERSE, 0.0, rng)
    if cfg.mode == "perturbed-yes":
        return instances.gen_yes(cfg.n, instances.Mode.PERTURBED, cfg.epsilon, rng)
    if cfg.mode == "no":
        return instances.gen_no(cfg.n, rng)
    if cfg.mode == "random":
        return instances.random_instance(cfg.n, rng)
    raise ValueError(f"unknown mode {cfg.mode!r}")


def cmd_gen(cfg: RunConfig) -> int:
    inst = _load_or_generate(cfg)
    if cfg.out:
        instances.save_instance(inst, cfg.out)
    status = instances.check_promise(inst)
    _emit(
        [
            ("n", inst.n),
            ("label", inst.label.name.title()),
            ("mode", inst.mode.name),
            ("seed", inst.seed),
            ("promise", status.value.value),
            ("trace_re", repr(status.trace.real)),
            ("trace_im", repr(status.trace.imag)),
            ("file", cfg.out or ""),
        ]
    )
    return EXIT_OK


def cmd_run(cfg: RunConfig) -> int:
    inst = _load_or_generate(cfg)
    protocol = protocols.Protocol(cfg.protocol)
    threshold = cfg.threshold if cfg.threshold is not None else protocols.default_threshold(protocol)
    if protocol is protocols.Protocol.DQC1:
        exact = protocols.dqc1_accept_exact(inst)
        est, stderr = protocols.dqc1_accept_sampled(
            inst, cfg.samples, RngStream(cfg.seed, 1), workers=cfg.workers
        )
    else:
        exact = protocols.fingerprint_accept_exact(inst)
        gen = RngStream(cfg.seed, 1).generator()
        outcomes = (gen.random(cfg.samples) < exact).astype(float)
        est, stderr = protocols.mean_and_stderr(outcomes)
    decision = (
        protocols.Decision.ACCEPT_YES if exact >= threshold else protocols.Decision.REJECT_NO
    )
    lines = [
        ("protocol", protocol.value),
        ("n", inst.n),
        ("exact_p", repr(exact)),
        ("estimated_p", repr(est)),
        ("stderr", repr(stderr)),
        ("samples", cfg.samples),
        ("decision", decision.value),
        ("qubit_cost", protocols.qubit_cost(protocol, inst.n)),
        ("threshold", repr(threshold)),
    ]
    if cfg.oracle:
        if protocol is protocols.Protocol.DQC1:
            oracle_p = circuits.dqc1_circuit_sim(inst)
        else:
            oracle_p = circuits.fingerprint_circuit_sim(inst)
        lines.append(("oracle_p", repr(oracle_p)))
        lines.append(("oracle_gap", repr(abs(oracle_p - exact))))
    if cfg.reps > 1:
        rule = protocols.DecisionRule(threshold, cfg.reps)
        report = protocols.amplify_decide(protocol, inst, rule, RngStream(cfg.seed, 2))
        lines += [
            ("amplified_decision", report.decision.value),
            ("amplified_fraction", repr(report.estimated_p)),
            ("hoeffding_bound", repr(report.error_bound)),
        ]
    _emit(lines, cfg.out)
    return EXIT_OK


_SUITES = {
    "schur": lambda s, r, tol: su2.schur_suite(s, r, tol=tol),
    "convolution": lambda s, r, tol: su2.convolution_suite(s, r, tol=tol),
    "plancherel": lambda s, r, tol: su2.plancherel_suite(s, r, tol=tol),
    "mudiag": lambda s, r, tol: su2.mudiag_suite(s, r, tol=tol),
    "claim": lambda s, r, tol: su2.claim_suite(s, r, tol=tol),
}


def cmd_verify(cfg: RunConfig) -> int:
    names = list(_SUITES) if cfg.suite == "all" else [cfg.suite]
    records: list[su2.CheckRecord] = []
    for idx, name in enumerate(names):
        records.extend(_SUITES[name](cfg.samples, RngStream(cfg.seed, idx), cfg.tolerance))
    rows = []
    for rec in records:
        rows.append(
            [rec.check, rec.params, repr(rec.deviation), repr(rec.tolerance), rec.samples,
             "pass" if rec.passed else "FAIL"]
        )
        print(
            f"{'pass' if rec.passed else 'FAIL'} {rec.check}[{rec.params}] "
            f"deviation={rec.deviation:.3e} tolerance={rec.tolerance:g} samples={rec.samples}"
        )
    if cfg.out:
        _write_csv(cfg.out, ["check", "params", "deviation", "tolerance", "samples", "status"], rows)
    return EXIT_OK if all(r.passed for r in records) else EXIT_FAIL


def cmd_netsim(cfg: RunConfig) -> int:
    inst = _load_or_generate(cfg)
    rng = RngStream(cfg.seed, 1)
    if cfg.role == "bob":
        handled = netsim.serve_bob("127.0.0.1", cfg.listen or 0, inst)
        _emit([("role", "bob"), ("messages_handled", handled)])
        return EXIT_OK
    if cfg.role == "alice":
        host, _, port = (cfg.connect or "").rpartition(":")
        report = netsim.connect_alice(host or "127.0.0.1", int(port), inst, cfg.samples, rng,
                                      cfg.threshold)
    else:  # driver mode: both endpoints locally
        report = netsim.run_session(inst, cfg.samples, rng, cfg.threshold)
    _emit(
        [
            ("n", report.n),
            ("rounds", report.rounds),
            ("total_model_qubits", report.total_model_qubits),
            ("decision", report.decision.value),
            ("estimate", repr(report.estimate)),
            ("stderr", repr(report.stderr)),
            ("samples", report.samples),
            ("payload_amplitudes", report.payload_amplitudes),
            ("payload_bytes_per_message", report.payload_bytes),
        ],
        cfg.out,
    )
    return EXIT_OK


def _timeit(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def cmd_bench(cfg: RunConfig) -> int:
    rows = []
    n = 2
    while n <= cfg.max_n:
        inst = instances.gen_yes(n, instances.Mode.EXACT_INVERSE, 0.0, RngStream(cfg.seed, n))
        exact_s = _timeit(lambda: protocols.dqc1_accept_exact(inst))
        sampled_s = _timeit(
            lambda: protocols.dqc1_accept_sampled(inst, min(cfg.samples, 100), RngStream(cfg.seed, 1))
        )
        dqc1_oracle_s = (
            repr(_timeit(lambda: circuits.dqc1_circuit_sim(inst)))
            if n <= circuits.DQC1_ORACLE_CAP
            else ""
        )
        fp_oracle_s = (
            repr(_timeit(lambda: circuits.fingerprint_circuit_sim(inst)))
            if n <= circuits.FINGERPRINT_ORACLE_CAP
            else ""
        )
        rows.append(
            [
                n,
                repr(exact_s),
                repr(sampled_s),
                dqc1_oracle_s,
                fp_oracle_s,
                protocols.qubit_cost(protocols.Protocol.DQC1, n),
                protocols.qubit_cost(protocols.Protocol.FINGERPRINT, n),
            ]
        )
        print(f"n={n} exact_s={exact_s:.2e} sampled_s={sampled_s:.2e}")
        n *= 2
    header = [
        "n", "exact_s", "sampled_s", "dqc1_oracle_s", "fingerprint_oracle_s",
        "dqc1_qubits", "fingerprint_qubits",
    ]
    if cfg.out:
        _write_csv(cfg.out, header, rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cleanqubit",
        description="Trace-product communication problem laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_n=True):
        if needs_n:
            p.add_argument("--n", type=int, default=64)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", type=str, default=None)

    p_gen = sub.add_parser("gen", help="generate an instance file")
    common(p_gen)
    p_gen.add_argument("--mode", choices=list(_GEN_MODES), default="exact-yes")
    p_gen.add_argument("--epsilon", type=float, default=0.3)

    p_run = sub.add_parser("run", help="run a protocol on an instance")
    common(p_run)
    p_run.add_argument("--protocol", choices=["dqc1", "fingerprint"], default="dqc1")
    p_run.add_argument("--mode", choices=list(_GEN_MODES), default="exact-yes")
    p_run.add_argument("--epsilon", type=float, default=0.3)
    p_run.add_argument("--in", dest="instance_file", type=str, default=None)
    p_run.add_argument("--samples", type=int, default=1000)
    p_run.add_argument("--reps", type=int, default=1)
    p_run.add_argument("--threshold", type=float, default=None)
    p_run.add_argument("--oracle", action="store_true")
    p_run.add_argument("--workers", type=int, default=1)

    p_verify = sub.add_parser("verify", help="run the identity-verification suites")
    p_verify.add_argument("suite", choices=[*_SUITES, "all"])
    p_verify.add_argument("--samples", type=int, default=DEFAULT_MC_SAMPLES)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--tolerance", type=float, default=DEFAULT_TOL.mc_check)
    p_verify.add_argument("--out", type=str, default=None)

    p_net = sub.add_parser("netsim", help="run the wire session")
    common(p_net)
    p_net.add_argument("--mode", choices=list(_GEN_MODES), default="exact-yes")
    p_net.add_argument("--epsilon", type=float, default=0.3)
    p_net.add_argument("--in", dest="instance_file", type=str, default=None)
    p_net.add_argument("--samples", type=int, default=100)
    p_net.add_argument("--threshold", type=float, default=None)
    p_net.add_argument("--driver", action="store_true")
    p_net.add_argument("--role", choices=["alice", "bob"], default=None)
    p_net.add_argument("--connect", type=str, default=None, help="host:port for role=alice")
    p_net.add_argument("--listen", type=int, default=None, help="port for role=bob")

    p_bench = sub.add_parser("bench", help="timing sweep over n")
    p_bench.add_argument("--max-n", dest="max_n", type=int, default=64)
    p_bench.add_argument("--samples", type=int, default=100)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--out", type=str, default=None)
    return parser


_COMMANDS = {
    "gen": cmd_gen,
    "run": cmd_run,
    "verify": cmd_verify,
    "netsim": cmd_netsim,
    "bench": cmd_bench,
}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    for name in vars(cfg):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = config_from_args(args)
    try:
        return _COMMANDS[args.command](cfg)
    except (instances.CalibrationError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError,) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (netsim.SessionError, OSError) as exc:
        print(f"transport/io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
