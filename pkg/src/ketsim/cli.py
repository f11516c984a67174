"""Command-line front end.

One executable, six subcommands: ``simulate``, ``teleport``, ``shor``,
``grover``, ``entropy``, ``selftest``.  Output is line-oriented
``key = value`` text with complex amplitudes as ``re+imi`` at 12 significant
digits, so identical invocations with identical seeds produce byte-identical
reports.  Exit codes: 0 success, 1 domain error, 2 argument error.
"""
from __future__ import annotations

import argparse
import math
import sys
from typing import Callable, Sequence

import numpy as np

from . import entropy as entropy_mod
from . import gates, grover, protocols, shor, state
from .measure import RandomSource, measure_standard_basis

__all__ = ["main", "entry"]


def _fmt_complex(z: complex) -> str:
    # +0.0 canonicalizes negative zeros so reports stay byte-stable
    return f"{z.real + 0.0:.12g}{z.imag + 0.0:+.12g}i"


def _fmt_real(x: float) -> str:
    return f"{x:.12g}"


class _Report:
    def __init__(self):
        self.lines: list[str] = []

    def add(self, key: str, value) -> None:
        self.lines.append(f"{key} = {value}")

    def add_state(self, prefix: str, ket: state.Ket) -> None:
        for k, amp in enumerate(ket.amplitudes):
            self.add(f"{prefix}[{k}]", _fmt_complex(complex(amp)))

    def emit(self, stream=None) -> None:
        out = stream or sys.stdout
        for line in self.lines:
            print(line, file=out)


def _read_amplitude_file(path: str) -> state.Ket:
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            re_s, im_s = line.split()
            pairs.append(complex(float(re_s), float(im_s)))
    return state.ket_from_amplitudes(np.array(pairs, dtype=np.complex128))


def _parse_state_csv(text: str) -> state.Ket:
    vals = [float(tok) for tok in text.split(",")]
    if len(vals) % 2:
        raise ValueError("amplitude list needs re,im pairs")
    amps = np.array(
        [complex(vals[i], vals[i + 1]) for i in range(0, len(vals), 2)],
        dtype=np.complex128,
    )
    return state.ket_from_amplitudes(amps)


def _cmd_simulate(args) -> _Report:
    with open(args.circuit, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        basis_index = int(args.input)
        input_ket = None
    except ValueError:
        basis_index = None
        input_ket = _read_amplitude_file(args.input)

    if input_ket is not None:
        n_qubits = input_ket.n_qubits
        if args.n_qubits is not None and args.n_qubits != n_qubits:
            raise ValueError(
                f"--n-qubits {args.n_qubits} conflicts with amplitude file "
                f"({n_qubits} qubits)"
            )
    elif args.n_qubits is not None:
        n_qubits = args.n_qubits
    else:
        probe = gates.parse_circuit(text, n_qubits=32)
        highest = max((t for s in probe.steps for t in s.targets), default=0)
        n_qubits = max(highest + 1, 1)
    circuit = gates.parse_circuit(text, n_qubits)
    if input_ket is None:
        input_ket = state.basis_ket(n_qubits, basis_index)

    rep = _Report()
    rep.add("subcommand", "simulate")
    rep.add("circuit", args.circuit)
    rep.add("input", args.input)
    rep.add("n_qubits", n_qubits)
    rep.add("steps", len(circuit.steps))
    final = gates.apply_circuit(circuit, input_ket)
    rep.add_state("amplitude", final)
    if args.measure:
        if args.seed is None:
            raise ValueError("--measure draws randomness; provide --seed")
        rng = RandomSource(args.seed)
        rep.add("seed", args.seed)
        idx, post = measure_standard_basis(final, rng)
        rep.add("measured_index", idx)
        rep.add_state("post_amplitude", post)
    return rep


def _cmd_teleport(args) -> _Report:
    input_ket = _parse_state_csv(args.input_state)
    rng = RandomSource(args.seed)
    transcript = protocols.teleport(input_ket, rng)
    rep = _Report()
    rep.add("subcommand", "teleport")
    rep.add("seed", args.seed)
    rep.add_state("input", transcript.input_state)
    rep.add_state("epr", transcript.epr_state)
    i, j = transcript.classical_bits
    rep.add("classical_bits", f"{i}{j}")
    rep.add("correction", transcript.correction.name)
    rep.add_state("output", transcript.output_state)
    rep.add("fidelity", _fmt_real(transcript.fidelity()))
    return rep


def _cmd_shor(args) -> _Report:
    rng = RandomSource(args.seed)
    cfg = shor.ShorConfig(n=args.N, q=args.Q, forced_m=args.m, forced_y=args.force_y)
    rep = _Report()
    rep.add("subcommand", "shor")
    rep.add("seed", args.seed)
    try:
        _, trace = shor.shor_factor(args.N, rng, cfg)
    except shor.FactoringFailure as exc:
        for line in exc.trace.lines():
            rep.lines.append(line)
        rep.add("error", str(exc))
        raise _DomainError(rep) from None
    rep.lines.extend(trace.lines())
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write("\n".join(trace.lines()) + "\n")
    return rep


def _cmd_grover(args) -> _Report:
    rng = RandomSource(args.seed)
    run = grover.grover_search(
        grover.marked_state_oracle(args.n_qubits, args.target),
        args.n_qubits,
        rng,
        snapshots=args.snapshots,
    )
    rep = _Report()
    rep.add("subcommand", "grover")
    rep.add("seed", args.seed)
    rep.add("n_qubits", args.n_qubits)
    rep.add("target", args.target)
    rep.add("iterations", run.iterations)
    if run.snapshots is not None:
        for k, snap in enumerate(run.snapshots):
            rep.add_state(f"iteration[{k}].amplitude", snap)
    rep.add("measured_index", run.measured_index)
    rep.add("success_probability", _fmt_real(run.success_probability))
    return rep


def _cmd_entropy(args) -> _Report:
    ket = _read_amplitude_file(args.state)
    rep = _Report()
    rep.add("subcommand", "entropy")
    rep.add("state", args.state)
    rep.add("n_qubits", ket.n_qubits)
    if ket.n_qubits < 2:
        rep.add("note", "single qubit: no nontrivial cut")
        return rep
    for qubit in range(ket.n_qubits):
        cut = tuple(q for q in range(ket.n_qubits) if q != qubit)
        verdict = entropy_mod.is_entangled_pure(ket, cut)
        rep.add(f"reduced_entropy[{qubit}]", _fmt_real(verdict.reduced_entropy))
        rep.add(f"entangled[{qubit}]", "yes" if verdict.entangled else "no")
    return rep


# ---------------------------------------------------------------------------
# selftest: the pinned golden battery


def _close(a, b, tol=1e-10) -> bool:
    return bool(np.max(np.abs(np.asarray(a) - np.asarray(b))) <= tol)


def _check_brackets() -> bool:
    pol = state.polarization_constants()
    s = 1 / math.sqrt(2)
    ok = abs(state.inner_product(pol["vertical"].amplitudes, pol["diagonal"].amplitudes) - s) < 1e-12
    ok &= (
        abs(
            state.inner_product(
                pol["right_circular"].amplitudes, pol["left_circular"].amplitudes
            )
        )
        < 1e-12
    )
    joint = state.tensor_states(pol["diagonal"], pol["right_circular"])
    ok &= _close(joint.amplitudes, np.array([1, -1j, 1, -1j]) / 2, 1e-12)
    proj = state.pure_density(pol["left_circular"]).matrix
    ok &= _close(proj, np.array([[1, -1j], [1j, 1]]) / 2, 1e-12)
    return bool(ok)


def _check_cnot_hamiltonian() -> bool:
    h = (math.pi / 2) * np.array(
        [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, -1], [0, 0, -1, 1]], dtype=np.complex128
    )
    u = gates.hamiltonian_evolution(h, t=1.0)
    ok = _close(u.matrix, gates.standard_gate("CNOT''").matrix, 1e-10)
    start = state.ket_from_amplitudes(np.array([1, 0, -1, 0], dtype=np.complex128))
    out = u.matrix @ start.amplitudes
    ok &= _close(out, np.array([1, 0, 0, -1]) / math.sqrt(2), 1e-10)
    return bool(ok)


def _check_density_fixtures() -> bool:
    pol = state.polarization_constants()
    mix = state.mixed_density(
        state.Ensemble(((0.75, pol["vertical"]), (0.25, pol["diagonal"])))
    )
    ok = _close(mix.matrix, np.array([[7, 1], [1, 1]]) / 8, 1e-12)
    left = state.mixed_density(
        state.Ensemble(((0.5, pol["vertical"]), (0.5, pol["horizontal"])))
    )
    right = state.mixed_density(
        state.Ensemble(((0.5, pol["diagonal"]), (0.5, pol["antidiagonal"])))
    )
    ok &= _close(left.matrix, np.eye(2) / 2, 1e-12)
    ok &= _close(left.matrix, right.matrix, 1e-12)
    epr = state.ket_from_amplitudes(np.array([1, 0, 0, -1], dtype=np.complex128))
    reduced = state.partial_trace(state.pure_density(epr), (0,))
    ok &= _close(reduced.matrix, np.eye(2) / 2, 1e-10)
    return bool(ok)


def _check_entropy() -> bool:
    epr = state.ket_from_amplitudes(np.array([1, 0, 0, -1], dtype=np.complex128))
    whole = entropy_mod.von_neumann_entropy(state.pure_density(epr))
    part = entropy_mod.von_neumann_entropy(
        state.partial_trace(state.pure_density(epr), (1,))
    )
    mixed = state.DensityOperator(np.eye(2, dtype=np.complex128) / 2)
    return whole <= 1e-9 and abs(part - 1.0) <= 1e-9 and abs(
        entropy_mod.von_neumann_entropy(mixed) - 1.0
    ) <= 1e-9


def _check_teleport() -> bool:
    a, b = 3 / 5, 4j / 5
    ket = state.Ket(np.array([a, b], dtype=np.complex128))
    for i in (0, 1):
        for j in (0, 1):
            out = protocols.teleport(ket, force_bits=(i, j))
            if not _close(out.output_state.amplitudes, ket.amplitudes, 1e-10):
                return False
    return True


def _check_shor_example() -> bool:
    cf = shor.continued_fraction_expand(13453, 16384)
    ok = cf.quotients == (0, 1, 4, 1, 1, 2, 3, 1, 1, 3, 1, 1, 1, 1, 3)
    ok &= cf.denominators == (1, 1, 5, 6, 11, 28, 95, 123, 218, 777, 995, 1772, 2767, 4539, 16384)
    prob = shor.prob_y_closed_form(13453, 6, 16384)
    ok &= abs(prob - 3.189335551e-7) / 3.189335551e-7 < 1e-6
    rng = RandomSource(0)
    cfg = shor.ShorConfig(n=91, forced_m=3, forced_y=13453)
    factors, trace = shor.shor_factor(91, rng, cfg)
    ok &= factors == (13, 7)
    tested = trace.attempts[0].convergents
    ok &= (tested[0].q_n, tested[0].mod_pow_value, tested[0].accepted) == (5, 61, False)
    ok &= (tested[1].q_n, tested[1].mod_pow_value, tested[1].accepted) == (6, 1, True)
    return bool(ok)


def _check_grover_example() -> bool:
    # The worked-example blackbox as printed (marked slot in the fifth position).
    blackbox = np.eye(8, dtype=np.complex128)
    blackbox[4, 4] = -1
    rng = RandomSource(1)
    run = grover.grover_search(gates.Gate("BLACKBOX", blackbox), 3, rng, snapshots=True)
    ok = run.iterations == 2
    s = math.sqrt(2)
    psi1 = np.array([1, 1, 1, 1, 5, 1, 1, 1]) / (4 * s)
    psi2 = np.array([-1, -1, -1, -1, 11, -1, -1, -1]) / (8 * s)
    ok &= _close(run.snapshots[1].amplitudes, psi1, 1e-12)
    ok &= _close(run.snapshots[2].amplitudes, psi2, 1e-12)
    ok &= abs(run.success_probability - 121 / 128) < 1e-10
    return bool(ok)


def _check_gate_cycles() -> bool:
    nots = gates.standard_gate("SQRT-NOT").matrix
    swaps = gates.standard_gate("SQRT-SWAP").matrix
    ok = _close(nots @ nots, gates.standard_gate("NOT").matrix, 1e-12)
    ok &= _close(swaps @ swaps, gates.standard_gate("SWAP").matrix, 1e-12)
    perm = list(range(8))
    perm[2], perm[6] = 6, 2
    perm[3], perm[7] = 7, 3
    ok &= _close(
        gates.permutation_to_unitary(perm).matrix, gates.standard_gate("CNOT").matrix, 0
    )
    return bool(ok)


_SELFTEST: tuple[tuple[str, Callable[[], bool]], ...] = (
    ("polarization_brackets", _check_brackets),
    ("cnot_from_hamiltonian", _check_cnot_hamiltonian),
    ("density_fixtures", _check_density_fixtures),
    ("entropy_fixtures", _check_entropy),
    ("teleport_corrections", _check_teleport),
    ("factoring_example", _check_shor_example),
    ("search_example", _check_grover_example),
    ("gate_identities", _check_gate_cycles),
)


def _cmd_selftest(_args) -> _Report:
    rep = _Report()
    rep.add("subcommand", "selftest")
    failed = 0
    for name, check in _SELFTEST:
        try:
            ok = check()
        except Exception:
            ok = False
        failed += 0 if ok else 1
        rep.add(f"check.{name}", "pass" if ok else "fail")
    rep.add("passed", len(_SELFTEST) - failed)
    rep.add("failed", failed)
    if failed:
        raise _DomainError(rep)
    return rep


class _DomainError(Exception):
    def __init__(self, report: _Report | None = None):
        self.report = report


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ketsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a circuit file on an input state")
    p.add_argument("--circuit", required=True)
    p.add_argument("--input", required=True, help="basis index or amplitude file")
    p.add_argument("--n-qubits", type=int, default=None)
    p.add_argument("--measure", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("teleport", help="teleport one qubit over a shared pair")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--input-state", default="0.6,0,0,0.8", help="re,im,re,im")
    p.set_defaults(handler=_cmd_teleport)

    p = sub.add_parser("shor", help="factor an odd composite")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--Q", type=int, default=None)
    p.add_argument("--force-y", type=int, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trace", default=None)
    p.set_defaults(handler=_cmd_shor)

    p = sub.add_parser("grover", help="search for a marked record")
    p.add_argument("--n-qubits", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--snapshots", action="store_true")
    p.set_defaults(handler=_cmd_grover)

    p = sub.add_parser("entropy", help="reduced entropies of a pure state")
    p.add_argument("--state", required=True, help="amplitude file, one re im pair per line")
    p.set_defaults(handler=_cmd_entropy)

    p = sub.add_parser("selftest", help="run the pinned golden checks")
    p.set_defaults(handler=_cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.handler(args)
    except _DomainError as exc:
        if exc.report is not None:
            exc.report.emit()
        return 1
    except (ValueError, OSError, shor.FactoringFailure) as exc:
        print(f"error = {exc}", file=sys.stderr)
        return 1
    report.emit()
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
