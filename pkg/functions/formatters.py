def format_estimate(value, se):
    """Format a Monte Carlo estimate with its standard error."""
    return f"{value:.6g} ± {se:.2g}"


def format_verdict(passed):
    """PASS or FAIL."""
    return "PASS" if passed else "FAIL"


def format_metadata_value(value):
    """Render a config value for a ``# key=value`` header line."""
    if isinstance(value, (list, tuple)):
        return ",".join(format_metadata_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)
