import pytest

from archsearch import SearchSpace, generate_synthetic, load_space


def make_space(segment_lengths, alphabet=3, free_tail=0, free_alphabet=None):
    """Toy space builder: identity-bearing segments plus optional free positions."""
    length = sum(segment_lengths) + free_tail
    segments = []
    pos = 0
    for n in segment_lengths:
        segments.append((pos, pos + n))
        pos += n
    sizes = [alphabet] * sum(segment_lengths) + [free_alphabet or alphabet] * free_tail
    ident = [0] * sum(segment_lengths) + [None] * free_tail
    return SearchSpace(
        length=length,
        alphabet_sizes=tuple(sizes),
        identity_symbol=tuple(ident),
        segments=tuple(segments),
    )


@pytest.fixture(scope="session")
def macronas():
    return load_space("macronas")


@pytest.fixture(scope="session")
def macronas_large():
    return load_space("macronas_large")


@pytest.fixture(scope="session")
def toy4():
    return make_space([4])


@pytest.fixture(scope="session")
def toy6():
    return make_space([3, 3])


@pytest.fixture(scope="session")
def toy8():
    return make_space([4, 4])


@pytest.fixture(scope="session")
def table6_separable(toy6):
    return generate_synthetic(toy6, seed=3, ruggedness=0.0)


@pytest.fixture(scope="session")
def table6_rugged(toy6):
    return generate_synthetic(toy6, seed=3, ruggedness=0.5)


@pytest.fixture(scope="session")
def macronas_table_rugged(macronas):
    return generate_synthetic(macronas, seed=1, ruggedness=0.3)


@pytest.fixture(scope="session")
def macronas_table_separable(macronas):
    return generate_synthetic(macronas, seed=1, ruggedness=0.0)
