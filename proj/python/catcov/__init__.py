from ._catcov import CatError, Category, pi1, run_cli, smash, universal_ball

__all__ = ["CatError", "Category", "pi1", "run_cli", "smash", "universal_ball"]
