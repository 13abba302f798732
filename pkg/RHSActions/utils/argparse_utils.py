import argparse


# for handling the optional keyval arguments that override budget entries
class KeyValueAction(argparse.Action):
    """
    Custom action for argparse to parse key-value pairs from the command line.
    Repeated uses of the flag accumulate into one dictionary.
    """

    def __call__(self, parser, namespace, values, option_string=None):
        keyvals = dict(getattr(namespace, self.dest, None) or {})
        for item in values:
            if "=" not in item:
                parser.error(f"expected key=value, got {item!r}")
            # Split on the first equals sign
            key, value = item.split("=", 1)
            keyvals[key.strip()] = value.strip()
        setattr(namespace, self.dest, keyvals)
