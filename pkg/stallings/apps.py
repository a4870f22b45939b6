from django.apps import AppConfig


class StallingsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'stallings'
    verbose_name = 'Subgroup graphs'
