import pytest

from noscodec import _kernels_py

try:
    from noscodec import _kernels

    _BACKENDS = [("python", _kernels_py), ("compiled", _kernels)]
except ImportError:
    _BACKENDS = [("python", _kernels_py)]


@pytest.fixture(params=_BACKENDS, ids=[name for name, _ in _BACKENDS])
def kernel_backend(request):
    """Each available kernel backend in turn."""
    return request.param[1]


def backend_pair():
    """(python, compiled) kernel modules, or None when the build is missing."""
    if len(_BACKENDS) < 2:
        return None
    return _BACKENDS[0][1], _BACKENDS[1][1]
