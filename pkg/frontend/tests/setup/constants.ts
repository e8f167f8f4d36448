export const BASE_URL = "http://127.0.0.1:8941";
export const TOKEN = "dev-token";
