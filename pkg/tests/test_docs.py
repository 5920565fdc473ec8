import doctest

import pathmetric


def test_package_docstring_examples():
    result = doctest.testmod(pathmetric)
    assert result.attempted > 0 and result.failed == 0
