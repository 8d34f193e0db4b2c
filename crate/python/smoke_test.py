"""Smoke test for the superplane Python module.

Build and install first:
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/superplane-*.whl
"""

import json

import superplane


def main() -> None:
    gamma = superplane.Algebra("I")
    x, th, dx = gamma.element("x"), gamma.element("th"), gamma.element("dx")

    assert str(x * dx) == "p*dx*x"
    assert th * th == 0
    assert x * gamma.element("xinv") == 1
    assert (x * th).d() == dx * th + x * th.d()
    assert x.d().d().is_zero()
    assert x.coproduct() == "x (x) x"
    assert x.antipode() == gamma.element("xinv")
    assert x.antipode().antipode() == x

    forms = superplane.Algebra("I", forms=True)
    w = forms.element("w")
    assert (w * w).is_zero()

    report = superplane.verify("calculus", family="I", fuel=20, seed=1)
    assert report.passed(), report
    assert report.seed == 1

    generic = superplane.verify("braid", family="II")
    special = superplane.verify("braid", family="II", bindings={"s": "q*r"})
    assert not generic.passed() and special.passed()

    solved = superplane.solve_consistency()
    assert solved.passed()

    derived = superplane.derive("forms")
    failing = sorted(c.paper_eq for c in derived.failures())
    assert failing == ["38a", "39b"], failing

    data = json.loads(superplane.verify("braid", family="I").to_json())
    assert set(data) == {"schema", "command", "family", "bindings", "seed", "checks"}

    try:
        gamma.element("x*(th")
    except ValueError as e:
        assert "1:6" in str(e)
    else:
        raise AssertionError("parse error not raised")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
