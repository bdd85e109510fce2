"""Shared fixtures: the tiny reference model M0 and random-model helpers."""

import importlib.util
import os

import numpy as np
import pytest

from pesrank import model_from_distributions, preprocess

SCRIPTS_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "scripts")


def load_script(name):
    """Import a module from scripts/ (they are runnable files, not a package)."""
    path = os.path.join(SCRIPTS_DIR, f"{name}.py")
    spec = importlib.util.spec_from_file_location(name, path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module

M0_DIMS = {
    "prefix": {"": 0.8, "1": 0.2},
    "base": {"aaa": 0.5, "bbb": 0.3, "ccc": 0.2},
    "suffix": {"": 0.6, "1": 0.4},
    "shift": {"[]": 0.9, "[0]": 0.1},
    "leet": {"[]": 1.0},
}


def make_m0():
    return model_from_distributions(M0_DIMS)


@pytest.fixture
def m0():
    model = make_m0()
    preprocess(model, gamma=1.09)
    return model


def random_small_model(rng, max_dim=10, require_distinct_products=False):
    """A random model with every dimension at most max_dim tokens. Token
    probabilities are continuous draws, so exact float collisions across the
    product population are rare; with require_distinct_products they are
    regenerated away entirely (the tightness-ratio guarantee assumes untied
    queries)."""
    from pesrank import population_products

    alphabets = {
        "prefix": [""] + [str(i) for i in range(1, max_dim)],
        "base": [f"w{chr(ord('a') + i)}" for i in range(max_dim)],
        "suffix": [""] + [f"{i}{i}" for i in range(1, max_dim)],
        "shift": ["[]", "[0]", "[-1]", "[0,-1]", "[1]", "[2]", "[-2]", "[0,1]", "[3]", "[-3]"],
        "leet": ["[]", "[1]", "[2]", "[4]", "[1,4]", "[3]", "[6]", "[12]", "[2,4]", "[9]"],
    }
    while True:
        dims = {}
        for dim, tokens in alphabets.items():
            n = int(rng.integers(1, max_dim + 1))
            weights = rng.random(n) + 1e-3
            dims[dim] = {tokens[i]: float(weights[i]) for i in range(n)}
        model = model_from_distributions(dims)
        if not require_distinct_products:
            return model
        products = population_products(model)
        if len(np.unique(products)) == len(products):
            return model
