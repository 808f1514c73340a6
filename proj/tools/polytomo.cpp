// Placeholder until the study driver lands.
int main() { return 0; }
