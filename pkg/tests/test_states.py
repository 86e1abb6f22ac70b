"""Core state-layer tests.

Claims covered:
    - Squared-modulus weights: equal superposition gives 0.5/0.5, eigenstates
      give 1/0, and the 1/3-2/3 state gives exactly those rationals.
    - apply_map: identity is a no-op, table maps match by weight-level
      equality, matrix maps agree with an independent dense matvec oracle,
      zero-norm images raise.
    - branch: one payoff-tagged branch per label, zero-weight labels dropped
      unless explicitly kept.
    - erase: replaces labels, preserves tags and weights, merges duplicate
      identities by weight addition, idempotent.
    - global_equal: equal across the two erased games, unequal pre-erasure,
      invariant under per-branch phase changes; an equivalence relation.
    - Erasure equivalence matches the payoff-weight multiset criterion on
      every 2-outcome rational state with denominator <= 5 (brute force).
"""
import math
from fractions import Fraction

import numpy as np
import pytest

from branchlab import (
    ERASED,
    Branch,
    DomainError,
    GlobalState,
    OutcomePartition,
    SingularMapError,
    StateMap,
    StateVector,
    apply_map,
    born_weights,
    branch,
    erase,
    global_equal,
    play,
    reward_game,
    state_equal,
)

UP_DOWN = OutcomePartition.of(["up", "down"])

PLUS_X = StateVector.from_weights({"up": Fraction(1, 2), "down": Fraction(1, 2)})
PLUS_Z = StateVector.from_weights({"up": 1}, UP_DOWN)
PSI_PRIME = StateVector.from_weights({"up": Fraction(1, 3), "down": Fraction(2, 3)})


def game_one(prep=PLUS_X):
    return reward_game(prep, ["up"], name="game-1")


def game_two(prep=PLUS_X):
    return reward_game(prep, ["down"], name="game-2")


class TestPartition:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            OutcomePartition.of([])

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            OutcomePartition.of(["up", "up"])

    def test_rejects_empty_label(self):
        with pytest.raises(ValueError):
            OutcomePartition.of(["up", ""])

    def test_index_unknown_label(self):
        with pytest.raises(DomainError):
            UP_DOWN.index("sideways")


class TestStateVector:
    def test_exact_kernel_rejects_bad_sum(self):
        with pytest.raises(ValueError):
            StateVector.from_weights({"up": Fraction(1, 2), "down": Fraction(1, 3)})

    def test_float_kernel_tolerates_roundoff(self):
        a = 1.0 / math.sqrt(2.0)
        s = StateVector.from_amplitudes({"up": a, "down": a})
        assert abs(s.weight("up") - 0.5) < 1e-9

    def test_float_kernel_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            StateVector.from_amplitudes({"up": 1.0, "down": 0.5})

    def test_rejects_negative_weight(self):
        with pytest.raises(ValueError):
            StateVector.from_weights({"up": Fraction(3, 2), "down": Fraction(-1, 2)})

    def test_kernel_inference(self):
        assert StateVector.from_weights({"up": Fraction(1, 2), "down": Fraction(1, 2)}).exact
        assert not StateVector.from_weights({"up": 0.5, "down": 0.5}).exact

    def test_json_round_trip_exact(self):
        doc = PSI_PRIME.to_json_dict()
        assert doc["weights"] == {"up": "1/3", "down": "2/3"}
        assert state_equal(StateVector.from_json_dict(doc), PSI_PRIME)

    def test_json_round_trip_float(self):
        a = 1.0 / math.sqrt(2.0)
        s = StateVector.from_amplitudes({"up": a + 0j, "down": -a + 0j})
        back = StateVector.from_json_dict(s.to_json_dict())
        assert state_equal(back, s)


class TestBornWeights:
    def test_equal_superposition(self):
        assert born_weights(PLUS_X, UP_DOWN) == {
            "up": Fraction(1, 2),
            "down": Fraction(1, 2),
        }

    def test_eigenstate(self):
        assert born_weights(PLUS_Z, UP_DOWN) == {"up": Fraction(1), "down": Fraction(0)}

    def test_one_third_two_thirds(self):
        assert born_weights(PSI_PRIME, UP_DOWN) == {
            "up": Fraction(1, 3),
            "down": Fraction(2, 3),
        }

    def test_float_kernel_matches_amplitudes(self):
        s = StateVector.from_amplitudes(
            {"up": 1.0 / math.sqrt(3.0), "down": math.sqrt(2.0) / math.sqrt(3.0)}
        )
        w = born_weights(s, UP_DOWN)
        assert abs(w["up"] - 1 / 3) < 1e-9 and abs(w["down"] - 2 / 3) < 1e-9

    def test_domain_mismatch(self):
        other = OutcomePartition.of(["left", "right"])
        with pytest.raises(DomainError):
            born_weights(PLUS_X, other)

    def test_weights_sum_to_one(self):
        assert sum(born_weights(PSI_PRIME, UP_DOWN).values()) == 1


def _oracle_matvec(rows, amps):
    """Independent dense matrix-vector product, then normalize."""
    image = np.array(rows, dtype=complex) @ np.array(amps, dtype=complex)
    return image / np.linalg.norm(image)


class TestApplyMap:
    def test_identity(self):
        assert apply_map(StateMap.identity(), PLUS_X) is PLUS_X

    def test_table_map(self):
        m = StateMap.from_table([(PLUS_X, PSI_PRIME)])
        out = apply_map(m, PLUS_X)
        assert born_weights(out, UP_DOWN) == {"up": Fraction(1, 3), "down": Fraction(2, 3)}

    def test_table_miss_raises(self):
        m = StateMap.from_table([(PLUS_X, PSI_PRIME)])
        with pytest.raises(DomainError):
            apply_map(m, PLUS_Z)

    def test_matrix_matches_numpy_oracle(self):
        rng = np.random.default_rng(7)
        labels = OutcomePartition.of(["a", "b", "c"])
        for _ in range(25):
            rows = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))).tolist()
            raw = rng.normal(size=3) + 1j * rng.normal(size=3)
            raw = raw / np.linalg.norm(raw)
            state = StateVector.from_amplitudes(dict(zip(labels, raw)), labels)
            result = apply_map(StateMap.from_matrix(rows), state)
            expected = _oracle_matvec(rows, [state.amplitude(l) for l in labels])
            got = np.array([result.amplitude(l) for l in labels])
            np.testing.assert_allclose(got, expected, atol=1e-12)

    def test_zero_norm_image_raises(self):
        m = StateMap.from_matrix([[0, 0], [0, 0]])
        with pytest.raises(SingularMapError):
            apply_map(m, PLUS_X)

    def test_born_after_identity_matrix(self):
        m = StateMap.from_matrix([[1, 0], [0, 1]])
        out = apply_map(m, StateVector.from_weights({"up": 0.5, "down": 0.5}))
        w = born_weights(out, UP_DOWN)
        assert abs(w["up"] - 0.5) < 1e-9


class TestBranching:
    def test_game_one_branches(self):
        state = play(game_one())
        assert state.weight_table() == {
            ("up", Fraction(1)): Fraction(1, 2),
            ("down", Fraction(0)): Fraction(1, 2),
        }

    def test_eigenstate_single_branch(self):
        state = play(game_one(PLUS_Z))
        assert state.weight_table() == {("up", Fraction(1)): Fraction(1)}

    def test_keep_zero_branches(self):
        state = branch(PLUS_Z, UP_DOWN, lambda l: 1 if l == "up" else 0, keep_zero_branches=True)
        table = state.weight_table()
        assert ("down", 0) in table and table[("down", 0)] == 0

    def test_branch_weights_must_normalize(self):
        with pytest.raises(ValueError):
            GlobalState.of([Branch("up", 1, Fraction(1, 2))])


class TestErase:
    def test_game_one_erased(self):
        erased = erase(play(game_one()))
        assert erased.weight_table() == {
            (ERASED, Fraction(1)): Fraction(1, 2),
            (ERASED, Fraction(0)): Fraction(1, 2),
        }

    def test_two_games_erase_to_same_state(self):
        assert global_equal(erase(play(game_one())), erase(play(game_two())))

    def test_idempotent(self):
        g = play(game_one())
        assert global_equal(erase(erase(g)), erase(g))

    def test_merges_same_tag(self):
        g = GlobalState.of(
            [Branch("up", "paid", Fraction(1, 2)), Branch("down", "paid", Fraction(1, 2))]
        )
        erased = erase(g)
        assert erased.weight_table() == {(ERASED, "paid"): Fraction(1)}


class TestGlobalEqual:
    def test_pre_erasure_games_differ(self):
        assert not global_equal(play(game_one()), play(game_two()))

    def test_phase_invariance(self):
        rng = np.random.default_rng(11)
        amps = rng.normal(size=4) + 1j * rng.normal(size=4)
        amps = amps / np.linalg.norm(amps)
        labels = ["a", "b", "c", "d"]
        base = GlobalState.of(
            [Branch(l, "t", abs(a) ** 2) for l, a in zip(labels, amps)]
        )
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=4))
        rotated = GlobalState.of(
            [Branch(l, "t", abs(a * ph) ** 2) for l, a, ph in zip(labels, amps, phases)]
        )
        # independent check: phases cannot move the squared moduli
        assert all(abs(abs(a * ph) ** 2 - abs(a) ** 2) < 1e-12 for a, ph in zip(amps, phases))
        assert global_equal(base, rotated)

    def test_equivalence_relation(self):
        states = [erase(play(game_one())), erase(play(game_two())), play(game_one())]
        for s in states:
            assert global_equal(s, s)
        for a in states:
            for b in states:
                assert global_equal(a, b) == global_equal(b, a)
                for c in states:
                    if global_equal(a, b) and global_equal(b, c):
                        assert global_equal(a, c)

    def test_differs_on_tags(self):
        doubled = Game(PLUS_X.partition and PLUS_X, {"up": 2, "down": 0}, name="doubled")
        assert not global_equal(erase(play(game_one())), erase(play(doubled)))


class TestErasureEquivalenceBruteForce:
    def test_denominator_up_to_five(self):
        """Erased-game equality holds exactly when payoff-weight multisets match."""
        for d in range(1, 6):
            for k in range(0, d + 1):
                w_up = Fraction(k, d)
                state = StateVector.from_weights({"up": w_up, "down": 1 - w_up})
                g1, g2 = game_one(state), game_two(state)
                lhs = global_equal(erase(play(g1)), erase(play(g2)))
                # independent multiset criterion straight from the weights
                def multiset(payoffs):
                    return sorted(
                        (payoffs[l], w)
                        for l, w in state.weights().items()
                        if w != 0
                    )
                rhs = multiset(g1.payoffs) == multiset(g2.payoffs)
                assert lhs == rhs, f"disagreement at weight {w_up}"


from branchlab import Game  # noqa: E402  (used by TestGlobalEqual.test_differs_on_tags)
