"""Smoke test for the Python bindings.

Build first:
    cargo build --release -p conreal-python --features extension-module
then run `python3 python/smoke_test.py`. The built library is copied to a
temporary directory as `conreal.so` when `conreal` is not importable already.
"""

import importlib
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        return importlib.import_module("conreal")
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libconreal_py.so"
        if lib.exists():
            tmp = pathlib.Path(tempfile.mkdtemp())
            shutil.copy(lib, tmp / "conreal.so")
            sys.path.insert(0, str(tmp))
            return importlib.import_module("conreal")
    sys.exit("conreal extension not built; see the module docstring")


def main():
    cr = load()

    assert cr.phi("1~1").approx(10) == "1/2"
    third = cr.Real.parse("1/3")
    assert cr.phi(third.path(40) + "~0").eq_at(third, 30)
    assert (third + third).approx(20) == "2/3"
    assert abs(-third).approx(5) == "1/3"
    assert cr.kappa("1").approx(40) == "2/3"
    assert cr.gamma(cr.kappa("0110~1").path(60) + "~0", 4) == "0110"
    assert cr.cantor_interval("01") == ("2/9", "1/3")
    assert cr.rho("122~0", 3) == "201"

    bar = cr.Bar("0\n10\n11\n")
    assert bar.eval(cr.Real.parse("1/2")).approx(10) == "3/2"
    assert bar.hitting("10~1") == 2
    assert bar.bound(64) == 2
    try:
        cr.Bar("").bound(100)
    except cr.CapExceeded:
        pass
    else:
        raise AssertionError("empty bar should exhaust the cap")

    ident = cr.Code("builtin:identity")
    violations, progress = ident.validate(5, 5)
    assert violations == [] and all(progress)
    assert ident.uc_witness(6, 64) == list(range(7))
    assert ident.eval(third).eq_at(third, 20)
    try:
        cr.Code("builtin:slow-zero").uc_witness(8, 64)
    except cr.CapExceeded:
        pass
    else:
        raise AssertionError("slow-zero code should exhaust the cap")
    try:
        cr.Real.parse("const:1/0")
    except ValueError:
        pass
    else:
        raise AssertionError("zero denominator accepted")

    status, out, err = cr.run_cli(["spread", "phi", "--path", "1~1", "--prec", "10"])
    assert (status, out, err) == (0, "1/2\n", "")
    print("python smoke test passed")


if __name__ == "__main__":
    main()
