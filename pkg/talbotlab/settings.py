from .base import *


# Local development settings, copy and adjust for other machines.

DEBUG = True

ALLOWED_HOSTS = []

# Not used for anything security relevant, Django only requires it to be set.
SECRET_KEY = 'talbotlab-local'

NSLIT['threads'] = os.cpu_count() or 1
