"""CMake-driven build of the _parle extension.

The C++ core, CLI and tests build with plain CMake; this shim only exists so
`pip install .` (or `pip install -e . --no-build-isolation`) produces the
python package without a separate cmake invocation.
"""

import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        source_dir = Path(__file__).parent.resolve()
        build_dir = Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)

        out_dir = Path(self.get_ext_fullpath(ext.name)).parent.resolve()
        out_dir.mkdir(parents=True, exist_ok=True)

        subprocess.run(
            [
                "cmake",
                "-S", str(source_dir),
                "-B", str(build_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                f"-DPython3_EXECUTABLE={sys.executable}",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_parle", "--parallel"],
            check=True,
        )
        staged = build_dir / "python" / "parle"
        for lib in staged.glob("_parle.*"):
            self.copy_file(lib, out_dir / lib.name)


setup(
    ext_modules=[CMakeExtension("parle._parle")],
    cmdclass={"build_ext": CMakeBuild},
)
