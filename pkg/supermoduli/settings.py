"""
Django settings for the supermoduli project.

The project hosts no web surface: it exists to run the supercalc management
commands and their tests. Values are read with python-decouple, so each key can be
set in the environment or in a .env file next to manage.py.
"""

from pathlib import Path

from decouple import config

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='django-insecure-supermoduli-local-only')

DEBUG = config('DEBUG', default=True, cast=bool)

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'supercalc',
]

DATABASES = {}

USE_TZ = True

# Calculator defaults, overridden per run by the command-line flags
SUPERCALC_TRUNC_ORDER = config('SUPERCALC_TRUNC_ORDER', default=4, cast=int)
SUPERCALC_BRANCH_SIGN = config('SUPERCALC_BRANCH_SIGN', default=1, cast=int)
# empty selects the deterministic left inverses
SUPERCALC_LEFT_INVERSE_SEED = config('SUPERCALC_LEFT_INVERSE_SEED', default='')

SUPERCALC_LOG_LEVEL = config('SUPERCALC_LOG_LEVEL', default='INFO')
SUPERCALC_LOG_FILE = config('SUPERCALC_LOG_FILE', default=str(BASE_DIR / 'supercalc.log'))

# Logging configuration; the console handler writes to stderr so stdout carries only JSON
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'file': {
            'level': 'DEBUG',
            'class': 'logging.FileHandler',
            'filename': SUPERCALC_LOG_FILE,
            'formatter': 'plain',
            'delay': True,
        },
        'console': {
            'level': 'WARNING',
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'django': {
            'handlers': ['file', 'console'],
            'level': 'INFO',
            'propagate': True,
        },
        'supercalc': {
            'handlers': ['file', 'console'],
            'level': SUPERCALC_LOG_LEVEL,
            'propagate': False,
        },
    },
}
