import doctest

import pytest

import fanshear.catalog
import fanshear.fileformats
import fanshear.lattice
import fanshear.scroll


@pytest.mark.parametrize(
    "module",
    [fanshear.lattice, fanshear.scroll, fanshear.catalog, fanshear.fileformats],
    ids=lambda m: m.__name__,
)
def test_module_doctests(module):
    results = doctest.testmod(module)
    assert results.attempted > 0
    assert results.failed == 0
