import pytest

from kappaforge import KappaEngine, PsiEngine


@pytest.fixture(scope="session")
def psi_engine():
    return PsiEngine()


@pytest.fixture(scope="session")
def kappa_engine():
    return KappaEngine()
