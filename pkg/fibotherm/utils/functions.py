from math import floor
from pathlib import Path


def rm_tree(path: Path):
    """
    Remove a directory and all the files and other folders it contains.

    :param path: The path to the directory.
    """
    if not path.is_dir():
        path.unlink(missing_ok=True)
        return

    for item in path.iterdir():
        rm_tree(item) if item.is_dir() else item.unlink(missing_ok=True)

    path.rmdir()


def linspace(start: float, stop: float, steps: int) -> tuple[float, ...]:
    """
    Get ``steps`` evenly spaced numbers from ``start`` to ``stop``, both included.

    :param start: The first number.
    :param stop: The last number.
    :param steps: The number of values, at least 1.
    :raises ValueError: If steps is less than 1.
    :return: The numbers.
    """
    if steps < 1:
        raise ValueError(f"steps must be at least 1, got {steps}")
    if steps == 1:
        return (start,)
    return tuple(start + (stop - start) * i / (steps - 1) for i in range(steps))


def parse_grid(text: str) -> tuple[float, ...]:
    """
    Parse a comma-separated list of numbers, or a range ``start:stop:step`` that includes ``stop`` when it is a whole
    number of steps away from ``start``.

    :param text: The grid specification.
    :raises ValueError: If the text is not a valid grid.
    :return: The numbers of the grid.
    """
    text = text.strip()
    if ":" in text:
        parts: list[str] = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range {text!r} must have the form start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"range {text!r} must have a positive step and stop >= start")
        steps: int = floor((stop - start) / step + 1e-9)
        return tuple(round(v, 12) for v in linspace(start, start + step * steps, steps + 1))
    if not (values := [v.strip() for v in text.split(",") if v.strip()]):
        raise ValueError("empty grid")
    return tuple(float(v) for v in values)
