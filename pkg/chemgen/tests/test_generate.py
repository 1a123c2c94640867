"""End-to-end generation, the problem-file contract with the solver
package, and the command line."""

import numpy as np
import pytest

from chemgen import build_problem, problem_text
from chemgen.cli import main
from chemgen.mapping import sector_dimension

from adapt_xstate.observables import CompiledObservable
from adapt_xstate.problems import fci_spectrum, load_problem, parse_problem
from adapt_xstate.state import prepare_reference


def cross_check(generated, k=None):
    """Parse the emitted text with the solver and rediagonalize there."""
    parsed = parse_problem(problem_text(generated))
    k = k or len(generated.fci_energies)
    independent = fci_spectrum(parsed, k)
    return parsed, np.max(np.abs(np.asarray(independent) -
                                 np.asarray(generated.fci_energies[:k])))


class TestBuildProblem:
    def test_h2_fields(self):
        gen = build_problem("h2", 0.7414)
        assert gen.n_qubits == 4
        assert gen.n_electrons == 2
        assert gen.label == "H2 sto-3g r = 0.7414"
        assert abs(gen.scf_energy - -1.1166844) < 1e-6
        assert abs(gen.fci_energies[0] - -1.1372702) < 1e-6
        # the sector only holds six states, so ten levels clamp
        assert len(gen.fci_energies) == sector_dimension(4, 2) == 6
        assert list(gen.fci_energies) == sorted(gen.fci_energies)

    def test_rejects_unknown_molecule(self):
        with pytest.raises(ValueError):
            build_problem("h3", 1.0)

    def test_distance_changes_the_problem(self):
        near = build_problem("h2", 0.6, levels=1)
        far = build_problem("h2", 1.2, levels=1)
        assert near.fci_energies[0] != far.fci_energies[0]


class TestSolverContract:
    def test_h2_round_trip_and_rediagonalization(self):
        gen = build_problem("h2", 0.7414)
        parsed, gap = cross_check(gen)
        assert parsed.n_qubits == gen.n_qubits
        assert parsed.n_electrons == gen.n_electrons
        assert parsed.label == gen.label
        assert list(parsed.fci_energies) == list(gen.fci_energies)
        assert len(parsed.hamiltonian.terms) == len(gen.terms)
        assert gap < 1e-8

    def test_h2_reference_state_reproduces_scf(self):
        gen = build_problem("h2", 0.7414)
        parsed = parse_problem(problem_text(gen))
        state = prepare_reference(parsed.n_qubits, parsed.n_electrons)
        energy = CompiledObservable(parsed.hamiltonian).expectation(
            state.amplitudes
        ).real
        assert abs(energy - gen.scf_energy) < 1e-8

    def test_h4_chain(self):
        gen = build_problem("h4", 1.0, levels=6)
        assert gen.n_qubits == 8
        assert gen.n_electrons == 4
        _, gap = cross_check(gen)
        assert gap < 1e-8

    def test_lih(self, lih_problem):
        assert lih_problem.n_qubits == 12
        assert lih_problem.n_electrons == 4
        assert abs(lih_problem.scf_energy - -7.8631337) < 1e-6
        assert abs(lih_problem.fci_energies[0] - -7.8827619) < 1e-6
        _, gap = cross_check(lih_problem, k=4)
        assert gap < 1e-8

    def test_lih_reference_state_reproduces_scf(self, lih_problem):
        parsed = parse_problem(problem_text(lih_problem))
        state = prepare_reference(parsed.n_qubits, parsed.n_electrons)
        energy = CompiledObservable(parsed.hamiltonian).expectation(
            state.amplitudes
        ).real
        assert abs(energy - lih_problem.scf_energy) < 1e-8


class TestCli:
    def test_generate(self, tmp_path, capsys):
        out = tmp_path / "h2.prob"
        code = main([
            "generate", "--molecule", "h2", "--distance", "0.7414",
            "--output", str(out),
        ])
        assert code == 0
        line = capsys.readouterr().out
        assert str(out) in line and "4 qubits" in line
        problem = load_problem(str(out))
        assert problem.n_qubits == 4
        assert abs(problem.fci_energies[0] - -1.1372702) < 1e-6

    def test_generate_levels_flag(self, tmp_path):
        out = tmp_path / "h2.prob"
        code = main([
            "generate", "--molecule", "h2", "--distance", "0.8",
            "--levels", "2", "--output", str(out),
        ])
        assert code == 0
        assert len(load_problem(str(out)).fci_energies) == 2

    def test_grid_is_stop_inclusive(self, tmp_path):
        code = main([
            "grid", "--molecule", "h2", "--start", "0.7", "--stop", "0.8",
            "--step", "0.05", "--levels", "1", "--output-dir", str(tmp_path),
        ])
        assert code == 0
        names = sorted(p.name for p in tmp_path.iterdir())
        assert names == ["h2_0.700.prob", "h2_0.750.prob", "h2_0.800.prob"]

    def test_negative_distance(self, tmp_path, capsys):
        code = main([
            "generate", "--molecule", "h2", "--distance", "-1.0",
            "--output", str(tmp_path / "x.prob"),
        ])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_zero_levels(self, tmp_path):
        code = main([
            "generate", "--molecule", "h2", "--distance", "1.0",
            "--levels", "0", "--output", str(tmp_path / "x.prob"),
        ])
        assert code == 2

    def test_bad_grid_bounds(self, tmp_path):
        code = main([
            "grid", "--molecule", "h2", "--start", "1.0", "--stop", "0.5",
            "--step", "0.1", "--output-dir", str(tmp_path),
        ])
        assert code == 2

    def test_unknown_molecule_rejected_by_parser(self, tmp_path):
        with pytest.raises(SystemExit):
            main([
                "generate", "--molecule", "xe2", "--distance", "1.0",
                "--output", str(tmp_path / "x.prob"),
            ])
