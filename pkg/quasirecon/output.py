import csv
import logging

from quasirecon.exceptions import OutputError


logger = logging.getLogger(__name__)


def format_number(value) -> str:
    """17 significant digits: enough for float(format_number(x)) == x."""
    return format(float(value), '.17g')


def write_table(path, header, rows, footer=()):
    """Write a CSV table with LF line endings and ``# key=value`` footer lines."""
    try:
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            count = 0
            for row in rows:
                writer.writerow([value if isinstance(value, str) else format_number(value)
                                 for value in row])
                count += 1
            for key, value in footer:
                if not isinstance(value, str):
                    value = format_number(value)
                f.write(f'# {key}={value}\n')
    except OSError as e:
        raise OutputError(f'Cannot write {path}: {e}') from e
    logger.info('Wrote %d rows to %s', count, path)
    return count
