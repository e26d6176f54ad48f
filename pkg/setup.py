#!/usr/bin/env python3
"""
Installer for abq-forms.

Installs the numerical stack, prepares the output and data folders, writes a
starter run configuration and optionally runs the self-test
(``python setup.py --selftest``).
"""

import os
import platform
import subprocess
import sys

MIN_PYTHON = (3, 8)
FOLDERS = ("output", os.path.join("data", "profiles"), "logs")
STACK = ("numpy", "scipy", "click", "psutil")

STARTER_CONFIG = """[flux]
alpha = 0.5
k = 0

[field]
type = zero

[cutoff]
a = 1.0
b = 2.0

[lambda]
value = 1.0

[grid]
r_max = 20.0
n = 400
grading = 2.0
"""


def print_header(message):
    """Banner between installer phases."""
    print("\n" + "=" * 60)
    print(f" {message}")
    print("=" * 60)


def print_step(message):
    print(f"\n>> {message}")


def python_ok():
    """True when the interpreter is new enough."""
    print_step("Checking interpreter...")
    found = sys.version_info[:2]
    if found < MIN_PYTHON:
        print(f"abq-forms needs Python {MIN_PYTHON[0]}.{MIN_PYTHON[1]}+, found "
              f"{found[0]}.{found[1]}.")
        return False
    print(f"Using Python {found[0]}.{found[1]} at {sys.executable}")
    return True


def install_requirements():
    """pip-install requirements.txt into the running interpreter."""
    print_step("Installing requirements.txt...")
    command = [sys.executable, "-m", "pip", "install", "-r", "requirements.txt"]
    try:
        subprocess.check_call(command)
    except subprocess.CalledProcessError as e:
        print(f"pip exited with status {e.returncode}")
        return False
    return True


def report_stack():
    """Print the version of every runtime package, or what is missing."""
    print_step("Checking numerical stack...")
    missing = []
    for name in STACK:
        try:
            module = __import__(name)
        except ImportError:
            missing.append(name)
            continue
        print(f"  {name:<8} {getattr(module, '__version__', '?')}")
    if missing:
        print(f"Missing packages: {', '.join(missing)}")
    return not missing


def make_folders():
    print_step("Preparing folders...")
    for folder in FOLDERS:
        os.makedirs(folder, exist_ok=True)
        print(f"  {folder}/")


def write_starter_config(path="config.ini"):
    """Leave an existing configuration untouched."""
    print_step("Run configuration...")
    if os.path.exists(path):
        print(f"  keeping {path}")
        return
    with open(path, "w") as f:
        f.write(STARTER_CONFIG)
    print(f"  wrote {path}")


def run_selftest():
    print_step("Running self-test...")
    return subprocess.call([sys.executable, "main.py", "selftest"]) == 0


def main():
    print_header("abq-forms installer")

    if not python_ok():
        sys.exit(1)
    if not install_requirements():
        print("Continuing; some requirements did not install.")
    stack_ok = report_stack()

    make_folders()
    write_starter_config()
    if platform.system() != "Windows":
        os.chmod("main.py", 0o755)

    if "--selftest" in sys.argv[1:]:
        if not stack_ok or not run_selftest():
            print_header("Self-test failed")
            sys.exit(1)

    print_header("Done")
    print("\nTry:")
    print(f"  {sys.executable} main.py selftest")
    print(f"  {sys.executable} main.py norms --alpha 0.3 --k -1 --lambda 1")


if __name__ == "__main__":
    main()
