"""Coefficient module constructions and the description grammar."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohomolab.group_ring import GroupSpec, RingElement, partial_norm
from cohomolab.intlinalg import AbelianInvariants, IntMatrix
from cohomolab.modules import (
    CyclotomicSpec,
    DualDivisible,
    GModule,
    coinvariants,
    cyclotomic_module,
    invariants_structure,
    invariants_submodule,
    parse_module,
    reduce_mod,
    star_dual,
    tensor_diagonal,
    tensor_outer,
    trivial_module,
    zmod_module,
)


def _cyclo(spec, p, m, exps):
    return cyclotomic_module(CyclotomicSpec(spec, p, m, tuple(exps)))


def test_trivial_module_actions():
    M = trivial_module(GroupSpec.of(2, 2), 1)
    assert M.rank == 1
    assert all(A == IntMatrix.identity(1) for A in M.actions)


def test_act_on_trivial_lattice():
    G = GroupSpec.of(2, 4)
    M = trivial_module(G)
    for i, o in enumerate(G.orders):
        # the full generator sum acts as multiplication by the factor order
        assert M.act(partial_norm(G, i, o)) == IntMatrix.from_rows([[o]])
        gen = RingElement.generator(G, i) - RingElement.one(G)
        assert M.act(gen) == IntMatrix.zeros(1, 1)


def test_act_cyclotomic_rank_one():
    G = GroupSpec.of(2)
    M = _cyclo(G, 2, 1, [1])
    gen = RingElement.generator(G, 0) - RingElement.one(G)
    assert M.act(gen) == IntMatrix.from_rows([[-2]])


def test_cyclotomic_companion_p3():
    G = GroupSpec.of(3, 3)
    M = _cyclo(G, 3, 1, [1, 0])
    assert M.rank == 2
    assert M.actions[0] == IntMatrix.from_rows([[0, -1], [1, -1]])
    assert M.actions[1] == IntMatrix.identity(2)


def test_cyclotomic_companion_satisfies_its_polynomial():
    # p=2, m=2: Phi(t) = t^2 + 1, root of order 4
    G = GroupSpec.of(4)
    M = _cyclo(G, 2, 2, [1])
    C = M.actions[0]
    assert C.mul(C) == IntMatrix.identity(2).scale(-1)
    C4 = C.mul(C).mul(C).mul(C)
    assert C4 == IntMatrix.identity(2)


def test_cyclotomic_rejects_trivial_exponents():
    with pytest.raises(ValueError):
        _cyclo(GroupSpec.of(2, 2), 2, 1, [0, 0])


def test_cyclotomic_rejects_incompatible_order():
    # root of order 4 cannot be an action of a generator of order 2
    with pytest.raises(ValueError):
        _cyclo(GroupSpec.of(2), 2, 2, [1])


def test_cyclotomic_normalization_predicate():
    G = GroupSpec.of(3, 3)
    assert CyclotomicSpec(G, 3, 1, (1, 0)).is_normalized()
    assert not CyclotomicSpec(G, 3, 1, (1, 1)).is_normalized()
    assert not CyclotomicSpec(G, 3, 1, (3, 1)).is_normalized()


def test_zmod_module_accepts_valid_action():
    G = GroupSpec.of(2)
    M = zmod_module(G, 4, [IntMatrix.from_rows([[3]])])
    assert M.modulus == 4
    assert M.act(RingElement.generator(G, 0)) == IntMatrix.from_rows([[3]])


def test_zmod_module_rejects_noninvertible_action():
    G = GroupSpec.of(2)
    with pytest.raises(ValueError):
        zmod_module(G, 4, [IntMatrix.from_rows([[2]])])


def test_module_rejects_noncommuting_actions():
    G = GroupSpec.of(2, 2)
    A = IntMatrix.from_rows([[0, 1], [1, 0]])
    B = IntMatrix.from_rows([[1, 0], [0, -1]])
    with pytest.raises(ValueError):
        GModule(G, 2, 0, (A, B))


def test_module_rejects_wrong_order():
    G = GroupSpec.of(3)
    with pytest.raises(ValueError):
        GModule(G, 1, 0, (IntMatrix.from_rows([[-1]]),))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_act_is_a_ring_homomorphism(data):
    G = GroupSpec.of(3, 3)
    M = _cyclo(G, 3, 1, [1, 1])
    els = G.elements()
    crafted = st.builds(
        lambda pairs: RingElement(G, dict(pairs)),
        st.lists(st.tuples(st.sampled_from(els), st.integers(-3, 3)), max_size=3),
    )
    x = data.draw(crafted)
    y = data.draw(crafted)
    assert M.act(x * y) == M.act(x).mul(M.act(y))
    assert M.act(x + y).data == tuple(
        tuple(a + b for a, b in zip(ra, rb))
        for ra, rb in zip(M.act(x).data, M.act(y).data)
    )


def test_star_dual_involution_and_examples():
    G = GroupSpec.of(2, 2)
    T = trivial_module(G)
    assert star_dual(T).actions == T.actions

    M = _cyclo(G, 2, 1, [1, 0])
    assert star_dual(M).actions[0] == IntMatrix.from_rows([[-1]])
    assert star_dual(star_dual(M)).actions == M.actions

    G2 = GroupSpec.of(9)
    M2 = _cyclo(G2, 3, 2, [1])
    assert star_dual(star_dual(M2)).actions == M2.actions


def test_star_dual_rejects_finite_modules():
    G = GroupSpec.of(2)
    with pytest.raises(ValueError):
        star_dual(reduce_mod(trivial_module(G), 4))


def test_tensor_with_trivial_is_identity_on_actions():
    G = GroupSpec.of(3, 3)
    M = _cyclo(G, 3, 1, [1, 0])
    T = trivial_module(G, 1)
    assert tensor_diagonal(T, M).actions == M.actions


def test_outer_tensor_example():
    M1 = _cyclo(GroupSpec.of(2), 2, 1, [1])
    M2 = trivial_module(GroupSpec.of(3))
    M = tensor_outer(M1, M2)
    assert M.spec == GroupSpec.of(2, 3)
    assert M.rank == 1
    assert M.actions[0] == IntMatrix.from_rows([[-1]])
    assert M.actions[1] == IntMatrix.from_rows([[1]])


def test_tensor_kronecker_rank():
    G = GroupSpec.of(3)
    M1 = _cyclo(G, 3, 1, [1])
    M2 = trivial_module(G, 3)
    assert tensor_diagonal(M1, M2).rank == 6


def test_tensor_modulus_combination():
    G = GroupSpec.of(2)
    latt = trivial_module(G)
    fin = reduce_mod(trivial_module(G), 4)
    assert tensor_diagonal(latt, fin).modulus == 4
    with pytest.raises(ValueError):
        tensor_diagonal(fin, reduce_mod(trivial_module(G), 3))


def test_invariants_and_coinvariants_trivial():
    M = trivial_module(GroupSpec.of(2, 2), 1)
    assert invariants_submodule(M).cols == 1
    assert coinvariants(M) == AbelianInvariants(1, ())


def test_invariants_and_coinvariants_cyclotomic():
    M = _cyclo(GroupSpec.of(2, 2), 2, 1, [1, 0])
    assert invariants_submodule(M).cols == 0
    assert coinvariants(M) == AbelianInvariants(0, (2,))

    M3 = _cyclo(GroupSpec.of(3), 3, 1, [1])
    assert invariants_submodule(M3).cols == 0
    assert coinvariants(M3) == AbelianInvariants(0, (3,))


def test_invariants_structure_finite():
    G = GroupSpec.of(2)
    M = reduce_mod(trivial_module(G), 4)
    assert invariants_structure(M) == AbelianInvariants(0, (4,))
    Mc = reduce_mod(_cyclo(G, 2, 1, [1]), 4)
    # fixed points of x -> -x on Z/4 are {0, 2}
    assert invariants_structure(Mc) == AbelianInvariants(0, (2,))


def test_reduce_mod_examples():
    G = GroupSpec.of(2)
    R = reduce_mod(trivial_module(G), 4)
    assert R.modulus == 4 and R.rank == 1
    R2 = reduce_mod(_cyclo(G, 2, 1, [1]), 2)
    assert R2.actions[0] == IntMatrix.from_rows([[1]])
    R3 = reduce_mod(_cyclo(GroupSpec.of(9), 3, 2, [1]), 5)
    assert R3.rank == 6


def test_random_modules_roundtrip_invariants():
    # invariants_submodule columns really are fixed by every generator
    rng = random.Random(8)
    G = GroupSpec.of(2, 4)
    mods = [
        trivial_module(G, 2),
        _cyclo(G, 2, 2, [0, 1]),
        _cyclo(G, 2, 1, [1, 1]),
        reduce_mod(_cyclo(G, 2, 2, [2, 1]), 8),
    ]
    for M in mods:
        basis = invariants_submodule(M)
        for j in range(basis.cols):
            v = basis.column(j)
            for i in range(G.ngens):
                A = M.actions[i]
                w = [sum(A.data[r][c] * v[c] for c in range(M.rank)) for r in range(M.rank)]
                if M.modulus:
                    assert [(a - b) % M.modulus for a, b in zip(w, v)] == [0] * M.rank
                else:
                    assert list(w) == list(v)
    assert rng  # rng reserved for future case growth


# ---------------------------------------------------------------------------
# description grammar


def test_parse_trivial_and_rank():
    G = GroupSpec.of(2, 2)
    assert parse_module("trivial", G).rank == 1
    assert parse_module("trivial:3", G).rank == 3


def test_parse_cyclotomic():
    G = GroupSpec.of(2, 2)
    M = parse_module("cyclo:2:1:1,0", G)
    assert isinstance(M, GModule)
    assert M.rank == 1
    assert M.actions[0] == IntMatrix.from_rows([[-1]])


def test_parse_nested_star_reduce():
    G = GroupSpec.of(4, 2)
    M = parse_module("reduce:4(star(cyclo:2:2:1,0))", G)
    assert isinstance(M, GModule)
    assert M.modulus == 4
    assert M.rank == 2


def test_parse_dual_divisible_marker():
    G = GroupSpec.of(2, 2)
    D = parse_module("dualD(cyclo:2:1:1,0)", G)
    assert isinstance(D, DualDivisible)
    assert D.inner.rank == 1
    with pytest.raises(ValueError):
        parse_module("star(dualD(trivial))", G)


def test_parse_tensor_diagonal_and_outer():
    G = GroupSpec.of(2, 3)
    outer = parse_module("tensor(cyclo:2:1:1,trivial)", G)
    assert isinstance(outer, GModule)
    assert outer.rank == 1
    assert outer.actions[0] == IntMatrix.from_rows([[-1]])
    assert outer.actions[1] == IntMatrix.from_rows([[1]])

    G2 = GroupSpec.of(3, 3)
    diag = parse_module("tensor(cyclo:3:1:1,0,trivial:2)", G2)
    assert isinstance(diag, GModule)
    assert diag.rank == 4


def test_parse_zmod_file(tmp_path):
    f = tmp_path / "acts.txt"
    f.write_text("3\n\n1\n")
    G = GroupSpec.of(2, 2)
    M = parse_module(f"zmod:4:@{f}", G)
    assert isinstance(M, GModule)
    assert M.modulus == 4
    assert M.actions[0] == IntMatrix.from_rows([[3]])
    assert M.actions[1] == IntMatrix.from_rows([[1]])


def test_parse_errors():
    G = GroupSpec.of(2)
    for bad in ["nonsense", "trivial:x", "cyclo:2:1", "zmod:4", "tensor(trivial)"]:
        with pytest.raises(ValueError):
            parse_module(bad, G)
