import logging
import os
import pickle

from libs.constants import SETTING_KEYS
from libs.utils import HSError

logger = logging.getLogger(__name__)


class SettingsError(HSError):
    pass


def _coerce(value):
    for kind in (int, float):
        try:
            return kind(value)
        except ValueError:
            pass
    return value


class Settings(object):
    """Stored command line defaults.

    Lookup order for a run: explicit flag, stored value, library default.
    """

    def __init__(self, path=None, keys=SETTING_KEYS):
        home = os.path.expanduser("~")
        self.data = {}
        self.keys = tuple(keys)
        self.path = path or os.path.join(home, '.alphaHSSettings.pkl')

    def __setitem__(self, key, value):
        self.data[key] = value

    def __getitem__(self, key):
        return self.data[key]

    def __contains__(self, key):
        return key in self.data

    def get(self, key, default=None):
        return self.data.get(key, default)

    def resolve(self, key, override, default):
        if override is not None:
            return override
        return self.data.get(key, default)

    def assign(self, item):
        """Store one KEY=VALUE pair; numbers are stored as int or float."""
        key, sep, value = item.partition('=')
        if not sep or key not in self.keys:
            raise SettingsError('expected KEY=VALUE with KEY one of {0}'.format(', '.join(self.keys)))
        self.data[key] = _coerce(value)
        return key

    def items(self):
        return [(key, self.data.get(key)) for key in self.keys]

    def save(self):
        if not self.path:
            return False
        with open(self.path, 'wb') as f:
            pickle.dump(self.data, f, pickle.HIGHEST_PROTOCOL)
        return True

    def load(self):
        if not os.path.exists(self.path):
            return False
        try:
            with open(self.path, 'rb') as f:
                data = pickle.load(f)
        except (OSError, pickle.UnpicklingError, EOFError) as e:
            logger.warning('Loading setting failed: %s', e)
            return False
        if not isinstance(data, dict):
            logger.warning('Ignoring settings file %s: not a mapping', self.path)
            return False
        self.data = data
        return True

    def reset(self):
        if self.path and os.path.exists(self.path):
            os.remove(self.path)
            logger.info('Removed settings file %s', self.path)
        self.data = {}
