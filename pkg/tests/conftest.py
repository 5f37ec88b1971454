from __future__ import annotations

import itertools
from pathlib import Path

import pytest

from folid.parser import parse_proof, parse_signature, parse_structure
from folid.semantics import FiniteStructure

FIXTURES = Path(__file__).parent / "fixtures"

EXAMPLE_SIG = "sig const 0; func s 1; ind N 1; rules rule z: => N(0); rule sc: N(x) => N(s(x));"

MODELS = ("clamp", "ident", "cycle", "split")
POSITIVE_PROOFS = ("nat_refl", "even_odd", "nat_case", "forall_succ", "exists_zero",
                   "logic_mix", "cut_wk", "e_implies_n")
NEGATIVE_PROOFS = ("no_progress", "subst_loop", "cut_lost")


def read(name: str) -> str:
    return (FIXTURES / name).read_text()


def load_nat():
    return parse_signature(read("nat.folid"), "nat.folid")


def load_model(name: str, sig) -> FiniteStructure:
    return parse_structure(read(f"{name}.model"), sig, f"{name}.model")


def load_proof(name: str, sig):
    return parse_proof(read(f"{name}.proof"), sig, f"{name}.proof")


def example_family(sig, max_size: int = 3) -> list[FiniteStructure]:
    """Every structure for const 0 / func s of size 1..max_size, inductive tables empty."""
    out = []
    for n in range(1, max_size + 1):
        for table in itertools.product(range(n), repeat=n):
            for zero in range(n):
                out.append(FiniteStructure(sig, n, {"0": zero}, {"s": table}, {}, {"N": frozenset()}))
    return out


@pytest.fixture(scope="session")
def nat():
    return load_nat()


@pytest.fixture(scope="session")
def example():
    return parse_signature(EXAMPLE_SIG)


@pytest.fixture(scope="session")
def family(example):
    return example_family(example[0])


@pytest.fixture(scope="session")
def models(nat):
    sig, _ = nat
    return {name: load_model(name, sig) for name in MODELS}


@pytest.fixture(scope="session")
def proofs(nat):
    sig, _ = nat
    return {name: load_proof(name, sig) for name in POSITIVE_PROOFS + NEGATIVE_PROOFS}
