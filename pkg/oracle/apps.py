from django.apps import AppConfig


class OracleConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'oracle'
    verbose_name = 'Brute-force enumeration'
