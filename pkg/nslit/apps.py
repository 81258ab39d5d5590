from django.apps import AppConfig


class NslitConfig(AppConfig):
    name = 'nslit'
    verbose_name = 'N-slit interference'
