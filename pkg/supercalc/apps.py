from django.apps import AppConfig


class SupercalcConfig(AppConfig):
    name = "supercalc"
    verbose_name = "Super Mumford form calculator"
