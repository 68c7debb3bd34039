"""
Django settings for cknlab project.

Generated by 'django-admin startproject' using Django 5.2.8.

For more information on this file, see
https://docs.djangoproject.com/en/5.2/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

import os

# Quick-start development settings - unsuitable for production
# See https://docs.djangoproject.com/en/5.2/howto/deployment/checklist/

# Веб-части нет; ключ нужен только самому Django
SECRET_KEY = os.environ.get('CKNLAB_SECRET_KEY', 'cknlab-local-only')

DEBUG = False

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'inequalities',
]

# Лаборатория ничего не хранит: тесты идут на SimpleTestCase
DATABASES = {}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'ru-ru'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True


# ============================================
# ЛОГИРОВАНИЕ
# ============================================

# Отчёты пишутся в stdout или --out, логи всегда в stderr
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'inequalities': {
            'handlers': ['console'],
            'level': os.environ.get('CKNLAB_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}


# ============================================
# ПАРАМЕТРЫ ЗАПУСКА ПО УМОЛЧАНИЮ
# ============================================

# Приоритет: флаги команды > файл --config > этот словарь
CKNLAB_DEFAULTS = {
    # Параметры неравенства
    'n': 3,
    'p': 2.0,
    's': 4.0,
    't': 1.0,
    'alpha': -0.5,

    # Квадратура
    # только для radial_layout='linear'; без значения берётся 40
    'r_max': None,
    'radial_panels': 160,
    'radial_points': 8,
    'ang_theta': 128,
    'ang_phi': 64,
    'radial_layout': 'log',
    'log_r_min': 1e-8,
    'log_r_max': 1e16,

    # Команды
    'k_max': 32,
    'family': 'gns-power',
    'alphas': '-0.5,-0.1,0,0.5,1,2',
    'samples': 200,
    'seed': 0,
    'format': None,
    'out': None,
}
